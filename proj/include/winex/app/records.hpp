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

#ifndef WINEX_APP_RECORDS_HPP
#define WINEX_APP_RECORDS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "winex/app/config.hpp"
#include "winex/error.hpp"
#include "winex/letter.hpp"
#include "winex/rational.hpp"

namespace winex::app {

/// A record that could not be decoded; carries its 1-based line number.
class RecordRejected : public InputTypeError {
public:
    RecordRejected(std::size_t line, const std::string& what)
        : InputTypeError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct FieldValue {
    std::string text;
    bool numeric = false;
};

using Fields = std::map<std::string, FieldValue>;

struct StreamRecord {
    std::string raw;
    Letter letter;
    Rational value;
    std::size_t position = 0;
};

namespace detail {

// Collects scalar fields of a JSON record, keeping numbers as their source text.
// Fields come from the "fields" object when present, else from the top level.
class FieldCollector {
public:
    using number_integer_t = nlohmann::json::number_integer_t;
    using number_unsigned_t = nlohmann::json::number_unsigned_t;
    using number_float_t = nlohmann::json::number_float_t;
    using string_t = std::string;
    using binary_t = nlohmann::json::binary_t;

    Fields top, nested;
    std::string error;

    bool null() { return scalar({}, false, true); }
    bool boolean(bool b) { return scalar(b ? "true" : "false", false); }
    bool number_integer(number_integer_t v) { return scalar(std::to_string(v), true); }
    bool number_unsigned(number_unsigned_t v) { return scalar(std::to_string(v), true); }
    bool number_float(number_float_t, const string_t& raw) { return scalar(raw, true); }
    bool string(string_t& s) { return scalar(s, false); }
    bool binary(binary_t&) { return scalar({}, false, true); }
    bool start_object(std::size_t) {
        if (depth_ == 1) in_fields_ = key_ == "fields";
        ++depth_;
        return true;
    }
    bool end_object() {
        --depth_;
        if (depth_ == 1) in_fields_ = false;
        return true;
    }
    bool start_array(std::size_t) {
        ++depth_;
        return true;
    }
    bool end_array() {
        --depth_;
        return true;
    }
    bool key(string_t& k) {
        key_ = k;
        return true;
    }
    bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& e) {
        error = e.what();
        return false;
    }

private:
    bool scalar(std::string text, bool numeric, bool skip = false) {
        if (depth_ == 0) {
            error = "record is not a JSON object";
            return false;
        }
        if (skip) return true;
        if (depth_ == 1) top[key_] = FieldValue{std::move(text), numeric};
        else if (depth_ == 2 && in_fields_) nested[key_] = FieldValue{std::move(text), numeric};
        return true;
    }

    std::size_t depth_ = 0;
    bool in_fields_ = false;
    std::string key_;
};

} // namespace detail

/// Parses one JSONL record without routing numbers through floating point.
inline Fields parse_jsonl_fields(std::string_view line, std::size_t line_no) {
    detail::FieldCollector c;
    const bool ok = nlohmann::json::sax_parse(line.begin(), line.end(), &c);
    if (!ok) throw RecordRejected(line_no, c.error.empty() ? "malformed JSON" : c.error);
    return c.nested.empty() ? c.top : c.nested;
}

/// Splits a CSV line; double quotes group commas and "" stands for a literal quote.
inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cells.back() += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.emplace_back();
        } else if (ch != '\r') {
            cells.back() += ch;
        }
    }
    return cells;
}

/// Turns input lines into letters according to the theory and the field mapping.
class RecordDecoder {
public:
    RecordDecoder(Theory theory, InputMapping mapping) : theory_(std::move(theory)), map_(std::move(mapping)) {}

    /// Decodes the next physical line. Blank lines and the CSV header yield nullopt.
    std::optional<StreamRecord> decode(std::string_view line, std::size_t line_no) {
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) return std::nullopt;
        Fields fields;
        if (map_.format == InputFormat::Csv) {
            auto cells = split_csv(line);
            if (!header_) {
                header_ = cells;
                for (const auto& f : {map_.letter_field, map_.value_field})
                    if (!f.empty() && std::find(header_->begin(), header_->end(), f) == header_->end())
                        throw RecordRejected(line_no, "header lacks field '" + f + "'");
                return std::nullopt;
            }
            if (cells.size() != header_->size())
                throw RecordRejected(line_no, "expected " + std::to_string(header_->size()) + " cells, found " +
                                                  std::to_string(cells.size()));
            for (std::size_t i = 0; i < cells.size(); ++i)
                fields[(*header_)[i]] = FieldValue{cells[i], parse_rational(cells[i]).has_value()};
        } else {
            fields = parse_jsonl_fields(line, line_no);
        }
        StreamRecord r;
        r.raw = std::string(line);
        const FieldValue& lv = field(fields, map_.letter_field, line_no);
        r.letter = make_letter(lv, line_no);
        if (!map_.value_field.empty()) {
            const FieldValue& vv = field(fields, map_.value_field, line_no);
            auto v = parse_rational(vv.text);
            if (!v) throw RecordRejected(line_no, "field '" + map_.value_field + "' is not a number: " + vv.text);
            r.value = *v;
        } else if (r.letter.is_number()) {
            r.value = r.letter.as_number();
        }
        r.position = next_++;
        return r;
    }

    std::size_t decoded() const noexcept { return next_; }

private:
    static const FieldValue& field(const Fields& f, const std::string& name, std::size_t line_no) {
        auto it = f.find(name);
        if (it == f.end()) throw RecordRejected(line_no, "missing field '" + name + "'");
        return it->second;
    }

    Letter make_letter(const FieldValue& v, std::size_t line_no) const {
        switch (theory_.kind()) {
        case TheoryKind::Finite:
            if (!theory_.letter_index(v.text))
                throw RecordRejected(line_no, "'" + v.text + "' is not in the alphabet");
            return Letter(v.text);
        case TheoryKind::DenseOrder:
            if (auto r = parse_rational(v.text)) return Letter(*r);
            throw RecordRejected(line_no, "'" + v.text + "' is not a number");
        case TheoryKind::Custom:
            if (auto r = parse_rational(v.text)) return Letter(*r);
            return Letter(v.text);
        }
        return Letter(v.text);
    }

    Theory theory_;
    InputMapping map_;
    std::optional<std::vector<std::string>> header_;
    std::size_t next_ = 0;
};

} // namespace winex::app

#endif // WINEX_APP_RECORDS_HPP
