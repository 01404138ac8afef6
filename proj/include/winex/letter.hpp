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

#ifndef WINEX_LETTER_HPP
#define WINEX_LETTER_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "winex/rational.hpp"

namespace winex {

/// A stream letter: a finite-alphabet symbol or an exact rational, optionally
/// carrying boolean track bits (used by theory extensions during formula compilation).
class Letter {
public:
    Letter() = default;
    explicit Letter(std::string symbol, std::uint32_t tracks = 0)
        : value_(std::move(symbol)), tracks_(tracks) {}
    explicit Letter(Rational number, std::uint32_t tracks = 0)
        : value_(std::move(number)), tracks_(tracks) {}
    explicit Letter(long long number) : value_(Rational(number)) {}

    static Letter symbol(std::string s) { return Letter(std::move(s)); }
    static Letter number(const Rational& r) { return Letter(r); }

    bool is_symbol() const noexcept { return std::holds_alternative<std::string>(value_); }
    bool is_number() const noexcept { return std::holds_alternative<Rational>(value_); }

    const std::string& as_symbol() const { return std::get<std::string>(value_); }
    const Rational& as_number() const { return std::get<Rational>(value_); }

    std::uint32_t tracks() const noexcept { return tracks_; }
    bool track(unsigned index) const noexcept { return (tracks_ >> index) & 1u; }

    Letter with_tracks(std::uint32_t tracks) const {
        Letter copy = *this;
        copy.tracks_ = tracks;
        return copy;
    }
    Letter without_tracks() const { return with_tracks(0); }

    std::string to_string() const {
        std::string base = is_symbol() ? as_symbol() : winex::to_string(as_number());
        if (tracks_ == 0) return base;
        return base + "#" + std::to_string(tracks_);
    }

    friend bool operator==(const Letter& a, const Letter& b) {
        return a.tracks_ == b.tracks_ && a.value_ == b.value_;
    }
    friend bool operator<(const Letter& a, const Letter& b) {
        if (a.value_.index() != b.value_.index()) return a.value_.index() < b.value_.index();
        if (a.is_symbol()) {
            if (a.as_symbol() != b.as_symbol()) return a.as_symbol() < b.as_symbol();
        } else if (a.as_number() != b.as_number()) {
            return a.as_number() < b.as_number();
        }
        return a.tracks_ < b.tracks_;
    }

    friend std::ostream& operator<<(std::ostream& os, const Letter& l) { return os << l.to_string(); }

private:
    std::variant<std::string, Rational> value_;
    std::uint32_t tracks_ = 0;
};

using Word = std::vector<Letter>;

/// Builds a word of single-character symbols: symbols("aab") == {a, a, b}.
inline Word symbols(std::string_view text) {
    Word w;
    w.reserve(text.size());
    for (char c : text) w.emplace_back(std::string(1, c));
    return w;
}

inline Word numbers(std::initializer_list<long long> values) {
    Word w;
    for (long long v : values) w.emplace_back(Rational(v));
    return w;
}

inline std::string to_string(std::span<const Letter> word) {
    std::string out;
    bool all_single = true;
    for (const Letter& l : word)
        if (!l.is_symbol() || l.as_symbol().size() != 1 || l.tracks() != 0) all_single = false;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!all_single && i > 0) out += ",";
        out += word[i].to_string();
    }
    return out;
}

/// The k+1 letters visible to a guard, oldest first: x_{-j} is letters[k - j].
class LookbackValuation {
public:
    LookbackValuation() = default;
    explicit LookbackValuation(std::vector<Letter> window) : window_(std::move(window)) {}

    std::size_t lookback() const noexcept { return window_.empty() ? 0 : window_.size() - 1; }
    const Letter& at(std::size_t j) const { return window_[window_.size() - 1 - j]; }
    std::span<const Letter> window() const noexcept { return window_; }

    friend bool operator==(const LookbackValuation&, const LookbackValuation&) = default;

private:
    std::vector<Letter> window_;
};

} // namespace winex

#endif // WINEX_LETTER_HPP
