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

#ifndef WINEX_PREDICATE_TEXT_HPP
#define WINEX_PREDICATE_TEXT_HPP

// Predicate text syntax:
//
//   pred    := or
//   or      := and ("||" and)*
//   and     := unary ("&&" unary)*
//   unary   := "!" unary | "(" pred ")" | "true" | "false" | atom
//   atom    := var "in" "{" [symbol ("," symbol)*] "}"
//            | operand cmp operand
//            | "t" digits                                  track bit of x0
//            | "min(" var ":" var ")" cmp "min(" var ":" var ")"
//   var     := "x0" | "x-" digits
//   operand := var | ["-"] digits [("/" | ".") digits]
//   cmp     := "<" | "<=" | "=" | "==" | "!=" | ">" | ">="
//   symbol  := identifier | digits | quoted string

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "winex/predicate.hpp"
#include "winex/rational.hpp"
#include "winex/scanner.hpp"

namespace winex {

namespace detail {

inline bool plain_symbol(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!Scanner::is_ident_char(c)) return false;
    return s != "true" && s != "false";
}

inline std::string quote_symbol(const std::string& s) {
    if (plain_symbol(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string var_text(std::size_t back) {
    return back == 0 ? "x0" : "x-" + std::to_string(back);
}

inline std::string operand_text(const Operand& o) {
    if (const Var* v = std::get_if<Var>(&o)) return var_text(v->back);
    return to_string(std::get<Rational>(o));
}

inline const char* op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

inline std::string atom_text(const Atom& atom) {
    return std::visit(
        [](const auto& a) -> std::string {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, MemberAtom>) {
                std::string out = var_text(a.var) + " in{";
                for (std::size_t i = 0; i < a.symbols.size(); ++i) {
                    if (i) out += ",";
                    out += quote_symbol(a.symbols[i]);
                }
                return out + "}";
            } else if constexpr (std::is_same_v<T, CompareAtom>) {
                return operand_text(a.lhs) + " " + op_text(a.op) + " " + operand_text(a.rhs);
            } else if constexpr (std::is_same_v<T, TrackAtom>) {
                return "t" + std::to_string(a.track);
            } else {
                return "min(" + var_text(a.from1) + ":" + var_text(a.to1) + ") " + op_text(a.op) +
                       " min(" + var_text(a.from2) + ":" + var_text(a.to2) + ")";
            }
        },
        atom);
}

inline void print(const Predicate& p, std::string& out) {
    auto child = [&out](const Predicate& c, bool parens) {
        if (parens) out += "(";
        print(c, out);
        if (parens) out += ")";
    };
    switch (p.kind()) {
    case NodeKind::True: out += "true"; return;
    case NodeKind::False: out += "false"; return;
    case NodeKind::Atom: out += atom_text(p.as_atom()); return;
    case NodeKind::Not: {
        const Predicate& c = p.children().front();
        out += "!";
        child(c, c.kind() == NodeKind::And || c.kind() == NodeKind::Or || c.kind() == NodeKind::Atom);
        return;
    }
    case NodeKind::And:
    case NodeKind::Or: {
        const char* sep = p.kind() == NodeKind::And ? " && " : " || ";
        bool first = true;
        for (const auto& c : p.children()) {
            if (!first) out += sep;
            first = false;
            child(c, c.kind() == NodeKind::And || c.kind() == NodeKind::Or);
        }
        return;
    }
    }
}

class PredicateParser {
public:
    explicit PredicateParser(Scanner& s) : s_(s) {}

    Predicate parse() { return parse_or(); }

private:
    Predicate parse_or() {
        std::vector<Predicate> parts{parse_and()};
        while (s_.accept("||")) parts.push_back(parse_and());
        return parts.size() == 1 ? parts.front() : make_or(parts);
    }

    Predicate parse_and() {
        std::vector<Predicate> parts{parse_unary()};
        while (s_.accept("&&")) parts.push_back(parse_unary());
        return parts.size() == 1 ? parts.front() : make_and(parts);
    }

    Predicate parse_unary() {
        char c = s_.peek();
        if (c == '!' && s_.peek_raw(1) != '=') {
            s_.accept("!");
            return make_not(parse_unary());
        }
        if (c == '(') {
            s_.accept("(");
            Predicate inner = parse_or();
            s_.expect(")");
            return inner;
        }
        if (s_.accept_word("true")) return Predicate::top();
        if (s_.accept_word("false")) return Predicate::bottom();
        return parse_atom();
    }

    bool at_var() {
        s_.skip_ws();
        if (s_.peek_raw() != 'x') return false;
        char n = s_.peek_raw(1);
        return std::isdigit(static_cast<unsigned char>(n)) ||
               (n == '-' && std::isdigit(static_cast<unsigned char>(s_.peek_raw(2))));
    }

    std::size_t parse_var() {
        if (!at_var()) s_.fail("expected lookback variable x0 or x-N");
        s_.accept("x");
        if (s_.peek_raw() == '-') {
            s_.accept("-");
            return s_.unsigned_integer();
        }
        std::size_t at = s_.pos();
        std::size_t v = s_.unsigned_integer();
        if (v != 0) s_.fail_at(at, "positive offsets are not lookback variables; use x0 or x-N");
        return 0;
    }

    Operand parse_operand() {
        if (at_var()) return Var{parse_var()};
        s_.skip_ws();
        std::size_t start = s_.pos();
        std::string lexeme;
        if (s_.peek_raw() == '-') {
            lexeme += '-';
            s_.seek(s_.pos() + 1);
        }
        auto digits = [&] {
            bool any = false;
            while (std::isdigit(static_cast<unsigned char>(s_.peek_raw()))) {
                lexeme += s_.peek_raw();
                s_.seek(s_.pos() + 1);
                any = true;
            }
            return any;
        };
        if (!digits()) s_.fail_at(start, "expected variable or number");
        char c = s_.peek_raw();
        if ((c == '/' || c == '.') && std::isdigit(static_cast<unsigned char>(s_.peek_raw(1)))) {
            lexeme += c;
            s_.seek(s_.pos() + 1);
            digits();
        }
        auto r = parse_rational(lexeme);
        if (!r) s_.fail_at(start, "invalid number");
        return *r;
    }

    CmpOp parse_cmp() {
        if (s_.accept("<=")) return CmpOp::Le;
        if (s_.accept(">=")) return CmpOp::Ge;
        if (s_.accept("!=")) return CmpOp::Ne;
        if (s_.accept("==")) return CmpOp::Eq;
        if (s_.accept("<")) return CmpOp::Lt;
        if (s_.accept(">")) return CmpOp::Gt;
        if (s_.accept("=")) return CmpOp::Eq;
        s_.fail("expected comparison operator");
    }

    std::string parse_symbol() {
        s_.skip_ws();
        char c = s_.peek_raw();
        if (c == '"') {
            s_.seek(s_.pos() + 1);
            std::string out;
            while (true) {
                char d = s_.peek_raw();
                if (d == '\0') s_.fail("unterminated quoted symbol");
                s_.seek(s_.pos() + 1);
                if (d == '"') break;
                if (d == '\\') {
                    d = s_.peek_raw();
                    s_.seek(s_.pos() + 1);
                }
                out += d;
            }
            return out;
        }
        std::size_t start = s_.pos();
        std::string out;
        while (Scanner::is_ident_char(s_.peek_raw())) {
            out += s_.peek_raw();
            s_.seek(s_.pos() + 1);
        }
        if (out.empty()) s_.fail_at(start, "expected symbol");
        return out;
    }

    std::pair<std::size_t, std::size_t> parse_range() {
        s_.expect("(");
        std::size_t from = parse_var();
        s_.expect(":");
        std::size_t to = parse_var();
        s_.expect(")");
        if (to > from) s_.fail("range must run from older to newer variable");
        return {from, to};
    }

    Predicate parse_atom() {
        s_.skip_ws();
        std::size_t start = s_.pos();
        if (s_.peek_raw() == 't' && std::isdigit(static_cast<unsigned char>(s_.peek_raw(1)))) {
            s_.accept("t");
            return Predicate::track(static_cast<unsigned>(s_.unsigned_integer()));
        }
        if (s_.accept_word("min")) {
            auto [f1, t1] = parse_range();
            CmpOp op = parse_cmp();
            if (!s_.accept_word("min")) s_.fail("expected 'min'");
            auto [f2, t2] = parse_range();
            return Predicate::atom(RangeMinAtom{f1, t1, op, f2, t2});
        }
        Operand lhs = parse_operand();
        if (std::holds_alternative<Var>(lhs) && s_.accept_word("in")) {
            s_.expect("{");
            std::vector<std::string> syms;
            if (s_.peek() != '}') {
                syms.push_back(parse_symbol());
                while (s_.accept(",")) syms.push_back(parse_symbol());
            }
            s_.expect("}");
            return Predicate::member(std::get<Var>(lhs).back, std::move(syms));
        }
        CmpOp op = parse_cmp();
        Operand rhs = parse_operand();
        if (!std::holds_alternative<Var>(lhs) && !std::holds_alternative<Var>(rhs))
            s_.fail_at(start, "comparison between two constants");
        return Predicate::compare(std::move(lhs), op, std::move(rhs));
    }

    Scanner& s_;
};

} // namespace detail

inline std::string to_text(const Predicate& p) {
    std::string out;
    detail::print(p, out);
    return out;
}

inline std::ostream& operator<<(std::ostream& os, const Predicate& p) { return os << to_text(p); }

/// Parses a predicate starting at the scanner position and stops before the first
/// character that cannot continue it.
inline Predicate parse_predicate(Scanner& s) { return detail::PredicateParser(s).parse(); }

inline Predicate parse_predicate(std::string_view text) {
    Scanner s(text);
    Predicate p = parse_predicate(s);
    if (!s.at_end()) s.fail("unexpected trailing input");
    return p;
}

} // namespace winex

#endif // WINEX_PREDICATE_TEXT_HPP
