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

#ifndef WINEX_SMSO_HPP
#define WINEX_SMSO_HPP

// Guarded window formula syntax:
//
//   formula := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "!" unary | "(" formula ")" | "true" | "false"
//            | "exists" var "<=" "xe" "." formula        first-order, var in [k, xe]
//            | "exists" SETVAR "<=" "xe" "." formula     second-order, SETVAR within [k, xe]
//            | "[" predicate "]" "(" var ")"
//            | SETVAR "(" var ")"
//            | var ("<" | "<=" | "=") var
//
// First-order variables start with a lowercase letter, set variables with an uppercase
// one. xb and xe are the free window-begin and window-end variables.

#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "winex/error.hpp"
#include "winex/predicate_text.hpp"
#include "winex/scanner.hpp"
#include "winex/theory.hpp"

namespace winex {

class Formula {
public:
    enum class Kind { True, False, PredAt, Less, In, Not, And, Or, ExistsFirst, ExistsSecond };

    static Formula constant(bool v) { return Formula(Node{v ? Kind::True : Kind::False}); }
    static Formula pred_at(Predicate p, std::string var) {
        Node n{Kind::PredAt};
        n.pred = std::move(p);
        n.a = std::move(var);
        return Formula(std::move(n));
    }
    static Formula less(std::string x, std::string y) {
        Node n{Kind::Less};
        n.a = std::move(x);
        n.b = std::move(y);
        return Formula(std::move(n));
    }
    static Formula in(std::string set, std::string var) {
        Node n{Kind::In};
        n.a = std::move(set);
        n.b = std::move(var);
        return Formula(std::move(n));
    }
    static Formula negation(Formula f) {
        Node n{Kind::Not};
        n.kids.push_back(std::move(f));
        return Formula(std::move(n));
    }
    static Formula conjunction(std::vector<Formula> fs) { return nary(Kind::And, std::move(fs)); }
    static Formula disjunction(std::vector<Formula> fs) { return nary(Kind::Or, std::move(fs)); }
    static Formula exists_first(std::string var, Formula body) { return quant(Kind::ExistsFirst, std::move(var), std::move(body)); }
    static Formula exists_second(std::string set, Formula body) { return quant(Kind::ExistsSecond, std::move(set), std::move(body)); }

    Kind kind() const noexcept { return node_->kind; }
    const Predicate& predicate() const { return node_->pred; }
    /// PredAt: position variable; Less: left operand; In: set variable; Exists: bound variable.
    const std::string& first() const { return node_->a; }
    /// Less: right operand; In: position variable.
    const std::string& second() const { return node_->b; }
    const std::vector<Formula>& children() const { return node_->kids; }
    const Formula& body() const { return node_->kids.at(0); }

    friend bool operator==(const Formula& x, const Formula& y) {
        if (x.node_ == y.node_) return true;
        const Node& a = *x.node_;
        const Node& b = *y.node_;
        return a.kind == b.kind && a.a == b.a && a.b == b.b && a.kids == b.kids &&
               (a.kind != Kind::PredAt || a.pred == b.pred);
    }

private:
    struct Node {
        Kind kind;
        Predicate pred;
        std::string a, b;
        std::vector<Formula> kids;
    };

    explicit Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

    static Formula nary(Kind k, std::vector<Formula> fs) {
        if (fs.size() == 1) return fs.front();
        Node n{k};
        n.kids = std::move(fs);
        return Formula(std::move(n));
    }
    static Formula quant(Kind k, std::string var, Formula body) {
        Node n{k};
        n.a = std::move(var);
        n.kids.push_back(std::move(body));
        return Formula(std::move(n));
    }

    std::shared_ptr<const Node> node_;
};

inline constexpr std::string_view window_begin = "xb";
inline constexpr std::string_view window_end = "xe";

/// A formula of the guarded fragment together with its theory.
struct GuardedFormula {
    Theory theory;
    Formula root;
};

namespace detail {

inline bool is_set_var(const std::string& v) { return !v.empty() && std::isupper(static_cast<unsigned char>(v[0])); }

class FormulaParser {
public:
    FormulaParser(Scanner& s, const Theory& t) : s_(s), t_(t) {
        first_.insert(std::string(window_begin));
        first_.insert(std::string(window_end));
    }

    Formula parse_or() {
        std::vector<Formula> parts{parse_and()};
        while (accept_single('|')) parts.push_back(parse_and());
        return Formula::disjunction(std::move(parts));
    }

private:
    bool accept_single(char c) {
        if (s_.peek() != c || s_.peek_raw(1) == c) return false;
        s_.accept(std::string(1, c));
        return true;
    }

    Formula parse_and() {
        std::vector<Formula> parts{parse_unary()};
        while (accept_single('&')) parts.push_back(parse_unary());
        return Formula::conjunction(std::move(parts));
    }

    Formula parse_unary() {
        if (s_.peek() == '!' && s_.peek_raw(1) != '=') {
            s_.accept("!");
            return Formula::negation(parse_unary());
        }
        if (s_.accept("(")) {
            Formula f = parse_or();
            s_.expect(")");
            return f;
        }
        if (s_.accept_word("true")) return Formula::constant(true);
        if (s_.accept_word("false")) return Formula::constant(false);
        if (s_.accept_word("exists")) return parse_exists();
        if (s_.accept("[")) {
            Predicate p = parse_predicate(s_);
            s_.expect("]");
            t_.validate(p);
            s_.expect("(");
            std::string v = position_var();
            s_.expect(")");
            return Formula::pred_at(std::move(p), std::move(v));
        }
        s_.skip_ws();
        std::size_t at = s_.pos();
        std::string name = s_.identifier();
        if (is_set_var(name)) {
            if (!sets_.count(name)) scope_error(at, "unknown set variable '" + name + "'");
            s_.expect("(");
            std::string v = position_var();
            s_.expect(")");
            return Formula::in(std::move(name), std::move(v));
        }
        check_first(at, name);
        if (s_.accept("<=")) {
            std::string rhs = position_var();
            return Formula::negation(Formula::less(rhs, name));
        }
        if (s_.accept("<")) return Formula::less(name, position_var());
        if (s_.accept("=")) {
            std::string rhs = position_var();
            return Formula::conjunction({Formula::negation(Formula::less(name, rhs)),
                                         Formula::negation(Formula::less(rhs, name))});
        }
        s_.fail("expected '<', '<=' or '=' after variable");
    }

    Formula parse_exists() {
        s_.skip_ws();
        std::size_t at = s_.pos();
        std::string var = s_.identifier();
        if (var == window_begin || var == window_end)
            throw FragmentViolation("the window variable '" + var + "' cannot be quantified" + where(at));
        if (first_.count(var) || sets_.count(var)) scope_error(at, "variable '" + var + "' is already bound");
        if (!s_.accept("<=")) throw FragmentViolation("quantifier over '" + var + "' lacks the guard '<= xe'" + where(s_.pos()));
        s_.skip_ws();
        std::size_t gat = s_.pos();
        std::string guard = s_.identifier();
        if (guard != window_end)
            throw FragmentViolation("quantifier over '" + var + "' must be guarded by xe, not '" + guard + "'" + where(gat));
        s_.expect(".");
        const bool set = is_set_var(var);
        (set ? sets_ : first_).insert(var);
        Formula body = parse_or();
        (set ? sets_ : first_).erase(var);
        return set ? Formula::exists_second(var, std::move(body)) : Formula::exists_first(var, std::move(body));
    }

    std::string position_var() {
        s_.skip_ws();
        std::size_t at = s_.pos();
        std::string v = s_.identifier();
        if (is_set_var(v)) scope_error(at, "set variable '" + v + "' used as a position");
        check_first(at, v);
        return v;
    }

    void check_first(std::size_t at, const std::string& v) {
        if (!first_.count(v)) scope_error(at, "unknown variable '" + v + "'");
    }

    std::string where(std::size_t at) const {
        try {
            s_.fail_at(at, "");
        } catch (const SyntaxError& e) {
            return " at " + std::to_string(e.line()) + ":" + std::to_string(e.column());
        }
        return {};
    }

    [[noreturn]] void scope_error(std::size_t at, const std::string& msg) const { throw ScopeError(msg + where(at)); }

    Scanner& s_;
    const Theory& t_;
    std::set<std::string> first_;
    std::set<std::string> sets_;
};

/// True when the printed form ends inside a quantifier scope.
inline bool open_ended(const Formula& f) {
    using K = Formula::Kind;
    if (f.kind() == K::ExistsFirst || f.kind() == K::ExistsSecond) return true;
    return f.kind() == K::Not && open_ended(f.body());
}

inline void print_formula(const Formula& f, std::string& out) {
    using K = Formula::Kind;
    auto sub = [&](const Formula& c, bool parens) {
        if (parens) out += "(";
        print_formula(c, out);
        if (parens) out += ")";
    };
    switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::PredAt: out += "[" + to_text(f.predicate()) + "](" + f.first() + ")"; return;
    case K::Less: out += f.first() + " < " + f.second(); return;
    case K::In: out += f.first() + "(" + f.second() + ")"; return;
    case K::Not: {
        const Formula& c = f.body();
        out += "!";
        sub(c, c.kind() == K::And || c.kind() == K::Or || c.kind() == K::Less);
        return;
    }
    case K::And:
    case K::Or: {
        const char* sep = f.kind() == K::And ? " & " : " | ";
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i) out += sep;
            const Formula& c = f.children()[i];
            sub(c, c.kind() == K::And || c.kind() == K::Or || open_ended(c));
        }
        return;
    }
    case K::ExistsFirst:
    case K::ExistsSecond:
        out += "exists " + f.first() + " <= xe . ";
        print_formula(f.body(), out);
        return;
    }
}

} // namespace detail

inline GuardedFormula parse_formula(std::string_view text, const Theory& t) {
    Scanner s(text);
    Formula f = detail::FormulaParser(s, t).parse_or();
    if (!s.at_end()) s.fail("unexpected trailing input");
    return GuardedFormula{t, std::move(f)};
}

inline std::string to_text(const Formula& f) {
    std::string out;
    detail::print_formula(f, out);
    return out;
}

struct Assignment {
    std::map<std::string, std::size_t> positions;
    std::map<std::string, std::set<std::size_t>> sets;
};

namespace detail {

class FormulaEvaluator {
public:
    FormulaEvaluator(std::span<const Letter> w, std::size_t k) : w_(w), k_(k) {}

    bool eval(const Formula& f, Assignment& asg) const {
        using K = Formula::Kind;
        switch (f.kind()) {
        case K::True: return true;
        case K::False: return false;
        case K::PredAt: {
            std::size_t p = asg.positions.at(f.first());
            if (p < k_) return false;
            return winex::eval(f.predicate(), w_.subspan(p - k_, k_ + 1));
        }
        case K::Less: return asg.positions.at(f.first()) < asg.positions.at(f.second());
        case K::In: return asg.sets.at(f.first()).count(asg.positions.at(f.second())) > 0;
        case K::Not: return !eval(f.body(), asg);
        case K::And:
            for (const auto& c : f.children())
                if (!eval(c, asg)) return false;
            return true;
        case K::Or:
            for (const auto& c : f.children())
                if (eval(c, asg)) return true;
            return false;
        case K::ExistsFirst: {
            const std::size_t end = asg.positions.at(std::string(window_end));
            bool found = false;
            for (std::size_t p = k_; p <= end && !found; ++p) {
                asg.positions[f.first()] = p;
                found = eval(f.body(), asg);
            }
            asg.positions.erase(f.first());
            return found;
        }
        case K::ExistsSecond: {
            const std::size_t end = asg.positions.at(std::string(window_end));
            const std::size_t span = end + 1 > k_ ? end + 1 - k_ : 0;
            if (span > 20) throw ResourceExhausted("second-order quantifier over more than 20 positions");
            bool found = false;
            for (std::size_t mask = 0; mask < (std::size_t{1} << span) && !found; ++mask) {
                std::set<std::size_t> members;
                for (std::size_t i = 0; i < span; ++i)
                    if ((mask >> i) & 1u) members.insert(k_ + i);
                asg.sets[f.first()] = std::move(members);
                found = eval(f.body(), asg);
            }
            asg.sets.erase(f.first());
            return found;
        }
        }
        return false;
    }

private:
    std::span<const Letter> w_;
    std::size_t k_;
};

} // namespace detail

/// Direct semantics. Quantified positions range over [k, xe]; assigned positions must lie
/// in [k-1, |w|-1] and atoms at positions below k are false.
inline bool eval_formula(std::span<const Letter> w, const GuardedFormula& f, const Assignment& asg) {
    const std::size_t k = f.theory.lookback();
    const std::size_t lo = k > 0 ? k - 1 : 0;
    auto check = [&](const std::string& name, std::size_t p) {
        if (p < lo || p >= w.size())
            throw AssignmentError("position " + std::to_string(p) + " of '" + name + "' is outside [" +
                                  std::to_string(lo) + ", " + std::to_string(w.size()) + ")");
    };
    for (const auto& [name, p] : asg.positions) check(name, p);
    for (const auto& [name, s] : asg.sets)
        for (std::size_t p : s) check(name, p);
    for (auto v : {window_begin, window_end})
        if (!asg.positions.count(std::string(v)))
            throw AssignmentError("assignment lacks '" + std::string(v) + "'");
    Assignment copy = asg;
    return detail::FormulaEvaluator(w, k).eval(f.root, copy);
}

/// Every (i_b, i_e) with k <= i_b <= i_e < |w| such that the formula holds on w[0:i_e].
inline std::set<std::pair<std::size_t, std::size_t>> windows_bruteforce(std::span<const Letter> w,
                                                                        const GuardedFormula& f) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    const std::size_t k = f.theory.lookback();
    for (std::size_t ie = k; ie < w.size(); ++ie) {
        detail::FormulaEvaluator ev(w.first(ie + 1), k);
        for (std::size_t ib = k; ib <= ie; ++ib) {
            Assignment asg;
            asg.positions[std::string(window_begin)] = ib;
            asg.positions[std::string(window_end)] = ie;
            if (ev.eval(f.root, asg)) out.emplace(ib, ie);
        }
    }
    return out;
}

} // namespace winex

#endif // WINEX_SMSO_HPP
