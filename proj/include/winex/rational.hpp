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

#ifndef WINEX_RATIONAL_HPP
#define WINEX_RATIONAL_HPP

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace winex {

/// Exact rational numbers. Guard evaluation never touches floating point.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "7", "-3/2", "1.25", "2.5e-3" exactly. Returns nullopt on malformed text.
inline std::optional<Rational> parse_rational(std::string_view text) {
    std::size_t i = 0;
    const std::size_t n = text.size();
    if (n == 0) return std::nullopt;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    auto digits = [&](BigInt& value, std::size_t& count) {
        count = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            value = value * 10 + (text[i] - '0');
            ++i;
            ++count;
        }
    };
    BigInt numerator = 0;
    std::size_t int_digits = 0;
    digits(numerator, int_digits);
    if (i < n && text[i] == '/') {
        if (int_digits == 0) return std::nullopt;
        ++i;
        BigInt denominator = 0;
        std::size_t den_digits = 0;
        digits(denominator, den_digits);
        if (den_digits == 0 || i != n || denominator == 0) return std::nullopt;
        Rational r(numerator, denominator);
        return negative ? Rational(-r) : r;
    }
    BigInt denominator = 1;
    std::size_t frac_digits = 0;
    if (i < n && text[i] == '.') {
        ++i;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            numerator = numerator * 10 + (text[i] - '0');
            denominator *= 10;
            ++i;
            ++frac_digits;
        }
    }
    if (int_digits + frac_digits == 0) return std::nullopt;
    Rational value(numerator, denominator);
    if (i < n && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool exp_negative = false;
        if (i < n && (text[i] == '+' || text[i] == '-')) {
            exp_negative = text[i] == '-';
            ++i;
        }
        long exponent = 0;
        std::size_t exp_digits = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 4096) return std::nullopt;
            ++i;
            ++exp_digits;
        }
        if (exp_digits == 0) return std::nullopt;
        BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exponent));
        value = exp_negative ? Rational(value / Rational(scale)) : Rational(value * Rational(scale));
    }
    if (i != n) return std::nullopt;
    return negative ? Rational(-value) : value;
}

/// "3" for integers, "p/q" otherwise. parse_rational() reads it back exactly.
inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/// Finite decimal expansion when the denominator only has factors 2 and 5.
inline std::optional<std::string> to_decimal_string(const Rational& r) {
    BigInt den = denominator(r);
    unsigned twos = 0, fives = 0;
    while (den % 2 == 0) { den /= 2; ++twos; }
    while (den % 5 == 0) { den /= 5; ++fives; }
    if (den != 1) return std::nullopt;
    const unsigned places = std::max(twos, fives);
    BigInt scaled = numerator(r) * boost::multiprecision::pow(BigInt(10), places) / denominator(r);
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string digits = scaled.str();
    if (places > 0) {
        if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
        digits.insert(digits.size() - places, ".");
    }
    return negative ? "-" + digits : digits;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace winex

#endif // WINEX_RATIONAL_HPP
