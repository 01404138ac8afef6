/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#ifndef WINEX_SCANNER_HPP
#define WINEX_SCANNER_HPP

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "winex/error.hpp"

namespace winex {

/// Character cursor shared by the predicate, SRE and formula parsers.
class Scanner {
public:
    explicit Scanner(std::string_view text) : text_(text) {}

    std::size_t pos() const noexcept { return pos_; }
    void seek(std::size_t p) noexcept { pos_ = p; }
    bool at_end() { skip_ws(); return pos_ >= text_.size(); }
    std::string_view rest() const { return text_.substr(pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    /// Next non-space character, or '\0' at end.
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    char peek_raw(std::size_t ahead = 0) const {
        return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
    }

    bool accept(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    /// Accepts a keyword only when not followed by an identifier character.
    bool accept_word(std::string_view word) {
        skip_ws();
        if (text_.substr(pos_, word.size()) != word) return false;
        std::size_t end = pos_ + word.size();
        if (end < text_.size() && is_ident_char(text_[end])) return false;
        pos_ = end;
        return true;
    }

    void expect(std::string_view token) {
        if (!accept(token)) fail("expected '" + std::string(token) + "'");
    }

    static bool is_ident_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    static bool is_ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    std::string identifier() {
        skip_ws();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected identifier");
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t unsigned_integer() {
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected number");
        std::size_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(text_[pos_] - '0');
            if (v > 1'000'000'000) fail("number too large");
            ++pos_;
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& what) const { fail_at(pos_, what); }

    [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
        std::size_t line = 1, column = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string near = at < text_.size() ? " near '" + std::string(text_.substr(at, 12)) + "'" : " at end of input";
        throw SyntaxError(what + near, line, column);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace winex

#endif // WINEX_SCANNER_HPP
