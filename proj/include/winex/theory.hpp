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

#ifndef WINEX_THEORY_HPP
#define WINEX_THEORY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "winex/cells.hpp"
#include "winex/error.hpp"
#include "winex/letter.hpp"
#include "winex/predicate.hpp"
#include "winex/predicate_text.hpp"
#include "winex/rational.hpp"

namespace winex {

enum class TheoryKind { Finite, DenseOrder, Custom };

struct Capabilities {
    bool can_decide_sat = false;
    bool can_enumerate = false;
    bool has_completion_property = false;
};

struct SatResult {
    bool satisfiable = false;
    std::optional<LookbackValuation> witness;
    explicit operator bool() const noexcept { return satisfiable; }
};

enum class BoolOp { And, Or, Not };

/// An alphabet theory: letter domain, atom language and lookback k, optionally
/// extended with boolean tracks carried by every letter.
class Theory {
public:
    static constexpr std::size_t default_minterm_budget = std::size_t{1} << 16;

    static Theory finite(std::vector<std::string> alphabet, std::size_t k) {
        if (alphabet.empty()) throw PreconditionError("finite theory needs a nonempty alphabet");
        std::vector<std::string> seen;
        for (const auto& a : alphabet) {
            if (std::find(seen.begin(), seen.end(), a) != seen.end())
                throw PreconditionError("duplicate letter '" + a + "' in alphabet");
            seen.push_back(a);
        }
        Theory t(TheoryKind::Finite, k);
        t.alphabet_ = std::make_shared<const std::vector<std::string>>(std::move(alphabet));
        return t;
    }
    static Theory dense(std::size_t k) { return Theory(TheoryKind::DenseOrder, k); }
    static Theory custom(std::string name, std::size_t k) {
        Theory t(TheoryKind::Custom, k);
        t.name_ = std::move(name);
        return t;
    }

    TheoryKind kind() const noexcept { return kind_; }
    std::size_t lookback() const noexcept { return k_; }
    unsigned tracks() const noexcept { return tracks_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<std::string>& alphabet() const {
        static const std::vector<std::string> none;
        return alphabet_ ? *alphabet_ : none;
    }
    std::size_t minterm_budget() const noexcept { return budget_; }

    Theory with_tracks(unsigned n) const {
        if (n > 24) throw PreconditionError("too many tracks");
        Theory t = *this;
        t.tracks_ = n;
        return t;
    }
    Theory without_tracks() const { return with_tracks(0); }
    Theory with_minterm_budget(std::size_t budget) const {
        Theory t = *this;
        t.budget_ = budget;
        return t;
    }

    Capabilities capabilities() const {
        switch (kind_) {
        case TheoryKind::Finite: return {true, true, true};
        case TheoryKind::DenseOrder: return {true, false, true};
        case TheoryKind::Custom: return {false, false, false};
        }
        return {};
    }
    bool can_decide_sat() const { return capabilities().can_decide_sat; }

    friend bool operator==(const Theory& a, const Theory& b) {
        return a.kind_ == b.kind_ && a.k_ == b.k_ && a.tracks_ == b.tracks_ && a.name_ == b.name_ &&
               a.alphabet() == b.alphabet();
    }

    std::string describe() const {
        std::string out;
        switch (kind_) {
        case TheoryKind::Finite: {
            out = "finite{";
            for (std::size_t i = 0; i < alphabet().size(); ++i) out += (i ? "," : "") + alphabet()[i];
            out += "}";
            break;
        }
        case TheoryKind::DenseOrder: out = "dense"; break;
        case TheoryKind::Custom: out = "custom(" + name_ + ")"; break;
        }
        out += " k=" + std::to_string(k_);
        if (tracks_) out += " tracks=" + std::to_string(tracks_);
        return out;
    }

    /// Throws MalformedPredicate or TheoryMismatch when p is not a predicate of this theory.
    void validate(const Predicate& p) const {
        for_each_atom(p, [&](const Atom& a) { validate_atom(a); });
    }

    void validate_letter(const Letter& l) const {
        if (tracks_ < 32 && (l.tracks() >> tracks_) != 0)
            throw InputTypeError("letter '" + l.to_string() + "' sets undeclared tracks");
        switch (kind_) {
        case TheoryKind::Finite:
            if (!l.is_symbol() || !letter_index(l.as_symbol()))
                throw InputTypeError("letter '" + l.to_string() + "' is not in the alphabet");
            return;
        case TheoryKind::DenseOrder:
            if (!l.is_number()) throw InputTypeError("letter '" + l.to_string() + "' is not a number");
            return;
        case TheoryKind::Custom: return;
        }
    }

    std::optional<std::size_t> letter_index(const std::string& s) const {
        const auto& a = alphabet();
        auto it = std::find(a.begin(), a.end(), s);
        if (it == a.end()) return std::nullopt;
        return static_cast<std::size_t>(it - a.begin());
    }

    bool eval(const Predicate& p, const LookbackValuation& v) const {
        if (v.window().size() != k_ + 1)
            throw MalformedPredicate("valuation assigns " + std::to_string(v.window().size()) +
                                     " variables, theory expects " + std::to_string(k_ + 1));
        return winex::eval(p, v.window());
    }

    Predicate combine(BoolOp op, std::span<const Predicate> args) const {
        for (const auto& a : args) validate(a);
        switch (op) {
        case BoolOp::Not:
            if (args.size() != 1) throw MalformedPredicate("negation takes exactly one operand");
            return make_not(args.front());
        case BoolOp::And:
        case BoolOp::Or:
            if (args.empty()) throw MalformedPredicate("conjunction and disjunction need an operand");
            return op == BoolOp::And ? make_and(args) : make_or(args);
        }
        return Predicate::bottom();
    }
    Predicate combine(BoolOp op, std::initializer_list<Predicate> args) const {
        return combine(op, std::span<const Predicate>(args.begin(), args.size()));
    }

    /// Letters of the (track-extended) alphabet in declaration order, tracks varying fastest.
    std::vector<Letter> enumerate_letters() const {
        if (kind_ != TheoryKind::Finite)
            throw CapabilityMissing("theory " + describe() + " cannot enumerate its letters");
        std::vector<Letter> out;
        for (const auto& s : alphabet())
            for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << tracks_); ++bits) out.emplace_back(s, bits);
        return out;
    }

    /// Number of distinct lookback windows a guard can tell apart (finite theories).
    std::size_t window_space() const {
        std::size_t n = std::size_t{1} << tracks_;
        for (std::size_t i = 0; i <= k_; ++i) {
            n *= alphabet().size();
            if (n > (std::size_t{1} << 40)) return n;
        }
        return n;
    }

    /// Visits every distinguishable window x_{-k}..x_0 (tracks only on x_0). A callback
    /// returning bool stops the enumeration by returning true.
    template <class F>
    void for_each_window(F&& f) const {
        if (kind_ != TheoryKind::Finite) throw CapabilityMissing("window enumeration needs a finite theory");
        const auto& a = alphabet();
        std::vector<std::size_t> digits(k_ + 1, 0);
        std::vector<Letter> window(k_ + 1);
        for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << tracks_); ++bits) {
            std::fill(digits.begin(), digits.end(), 0);
            while (true) {
                for (std::size_t i = 0; i <= k_; ++i) window[i] = Letter(a[digits[i]]);
                window[k_] = window[k_].with_tracks(bits);
                std::span<const Letter> view(window);
                if constexpr (std::is_same_v<std::invoke_result_t<F&, std::span<const Letter>>, bool>) {
                    if (f(view)) return;
                } else {
                    f(view);
                }
                std::size_t i = 0;
                while (i <= k_ && ++digits[i] == a.size()) digits[i++] = 0;
                if (i > k_) break;
            }
        }
    }

    SatResult is_satisfiable(const Predicate& p) const;
    bool satisfiable(const Predicate& p) const { return is_satisfiable(p).satisfiable; }
    bool valid(const Predicate& p) const { return !satisfiable(make_not(p)); }
    bool equivalent(const Predicate& a, const Predicate& b) const {
        return !satisfiable(make_or({make_and({a, make_not(b)}), make_and({b, make_not(a)})}));
    }

    /// Returns an equivalent, usually smaller predicate. Finite theories with small
    /// window spaces get a canonical sum of boxes.
    Predicate simplify(const Predicate& p) const;

    /// Canonical predicate true exactly on the windows flagged in `table`, indexed in
    /// for_each_window order.
    Predicate from_truth_table(const std::vector<char>& table) const;

    /// Whether guards of this theory are small enough to tabulate.
    bool tabulable() const {
        return kind_ == TheoryKind::Finite && alphabet().size() <= 64 && window_space() <= 4096;
    }

private:
    Theory(TheoryKind kind, std::size_t k) : kind_(kind), k_(k) {}

    void validate_atom(const Atom& atom) const;

    TheoryKind kind_;
    std::size_t k_;
    unsigned tracks_ = 0;
    std::shared_ptr<const std::vector<std::string>> alphabet_;
    std::string name_;
    std::size_t budget_ = default_minterm_budget;
};

inline void Theory::validate_atom(const Atom& atom) const {
    auto check_var = [&](std::size_t j) {
        if (j > k_)
            throw MalformedPredicate("variable " + detail::var_text(j) + " is outside x-" + std::to_string(k_) +
                                     "..x0");
    };
    std::visit(
        [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, MemberAtom>) {
                if (kind_ == TheoryKind::DenseOrder)
                    throw TheoryMismatch("membership atom '" + detail::atom_text(a) + "' in a dense order theory");
                check_var(a.var);
                if (kind_ == TheoryKind::Finite)
                    for (const auto& s : a.symbols)
                        if (!letter_index(s)) throw MalformedPredicate("symbol '" + s + "' is not in the alphabet");
            } else if constexpr (std::is_same_v<T, CompareAtom>) {
                for (const Operand* o : {&a.lhs, &a.rhs})
                    if (const Var* v = std::get_if<Var>(o)) check_var(v->back);
                if (kind_ == TheoryKind::Finite) {
                    bool vars = std::holds_alternative<Var>(a.lhs) && std::holds_alternative<Var>(a.rhs);
                    if (!vars || (a.op != CmpOp::Eq && a.op != CmpOp::Ne))
                        throw TheoryMismatch("atom '" + detail::atom_text(a) +
                                             "' needs an ordered theory; finite theories compare letters with = and != only");
                }
            } else if constexpr (std::is_same_v<T, TrackAtom>) {
                if (a.track >= tracks_)
                    throw MalformedPredicate("track t" + std::to_string(a.track) + " is not declared");
            } else {
                if (kind_ != TheoryKind::Custom)
                    throw TheoryMismatch("range-minimum atom '" + detail::atom_text(a) + "' needs a custom theory");
                check_var(a.from1);
                check_var(a.from2);
            }
        },
        atom);
}

namespace detail {

struct Literal {
    const Atom* atom;
    bool positive;
};

struct Nnf {
    enum Kind { Lit, And, Or, True, False } kind;
    Literal lit{};
    std::vector<Nnf> kids;
};

inline Nnf to_nnf(const Predicate& p, bool positive) {
    switch (p.kind()) {
    case NodeKind::True: return Nnf{positive ? Nnf::True : Nnf::False};
    case NodeKind::False: return Nnf{positive ? Nnf::False : Nnf::True};
    case NodeKind::Atom: return Nnf{Nnf::Lit, Literal{&p.as_atom(), positive}};
    case NodeKind::Not: return to_nnf(p.children().front(), !positive);
    case NodeKind::And:
    case NodeKind::Or: {
        bool conj = (p.kind() == NodeKind::And) == positive;
        Nnf n{conj ? Nnf::And : Nnf::Or};
        for (const auto& c : p.children()) n.kids.push_back(to_nnf(c, positive));
        return n;
    }
    }
    return Nnf{Nnf::False};
}

inline bool track_literals_consistent(const std::vector<Literal>& lits, std::uint32_t& bits) {
    std::uint32_t set = 0, value = 0;
    for (const auto& l : lits) {
        const auto* t = std::get_if<TrackAtom>(l.atom);
        if (!t) continue;
        std::uint32_t b = std::uint32_t{1} << t->track;
        if ((set & b) && (((value & b) != 0) != l.positive)) return false;
        set |= b;
        if (l.positive) value |= b;
    }
    bits = value;
    return true;
}

/// Satisfies a conjunction of order literals over x_{-k}..x_0 and rational constants.
inline std::optional<std::vector<Rational>> solve_order(const std::vector<Literal>& lits, std::size_t k) {
    std::vector<Rational> consts;
    for (const auto& l : lits)
        if (const auto* c = std::get_if<CompareAtom>(l.atom))
            for (const Operand* o : {&c->lhs, &c->rhs})
                if (const Rational* r = std::get_if<Rational>(o)) consts.push_back(*r);
    std::sort(consts.begin(), consts.end());
    consts.erase(std::unique(consts.begin(), consts.end()), consts.end());

    const std::size_t n = k + 1 + consts.size();
    auto node = [&](const Operand& o) -> std::size_t {
        if (const Var* v = std::get_if<Var>(&o)) return v->back;
        auto it = std::lower_bound(consts.begin(), consts.end(), std::get<Rational>(o));
        return k + 1 + static_cast<std::size_t>(it - consts.begin());
    };
    // rel[u][v]: 0 unknown, 1 u <= v, 2 u < v
    std::vector<std::vector<int>> rel(n, std::vector<int>(n, 0));
    std::vector<std::pair<std::size_t, std::size_t>> distinct;
    auto add = [&](std::size_t u, std::size_t v, int strength) { rel[u][v] = std::max(rel[u][v], strength); };
    for (std::size_t u = 0; u < n; ++u) rel[u][u] = 1;
    for (std::size_t i = k + 2; i < n; ++i) add(i - 1, i, 2);
    for (const auto& l : lits) {
        const auto* c = std::get_if<CompareAtom>(l.atom);
        if (!c) continue;
        CmpOp op = l.positive ? c->op : negate(c->op);
        std::size_t a = node(c->lhs), b = node(c->rhs);
        switch (op) {
        case CmpOp::Lt: add(a, b, 2); break;
        case CmpOp::Le: add(a, b, 1); break;
        case CmpOp::Gt: add(b, a, 2); break;
        case CmpOp::Ge: add(b, a, 1); break;
        case CmpOp::Eq: add(a, b, 1); add(b, a, 1); break;
        case CmpOp::Ne: distinct.emplace_back(a, b); break;
        }
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t u = 0; u < n; ++u) {
            if (!rel[u][m]) continue;
            for (std::size_t v = 0; v < n; ++v)
                if (rel[m][v]) add(u, v, std::max(rel[u][m], rel[m][v]));
        }
    for (std::size_t u = 0; u < n; ++u)
        if (rel[u][u] == 2) return std::nullopt;
    auto same = [&](std::size_t u, std::size_t v) { return rel[u][v] && rel[v][u]; };
    for (auto [a, b] : distinct)
        if (same(a, b)) return std::nullopt;

    // Assign values class by class in topological order of the strict-predecessor count.
    std::vector<std::size_t> order(n), preds(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
        order[u] = u;
        for (std::size_t v = 0; v < n; ++v)
            if (rel[v][u] && !same(v, u)) ++preds[u];
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return preds[a] < preds[b]; });
    std::vector<std::optional<Rational>> value(n);
    std::set<Rational> used(consts.begin(), consts.end());
    for (std::size_t u : order) {
        if (value[u]) continue;
        std::optional<Rational> fixed;
        for (std::size_t v = k + 1; v < n; ++v)
            if (same(u, v)) fixed = consts[v - k - 1];
        if (!fixed) {
            std::optional<Rational> lo, hi;
            for (std::size_t v = 0; v < n; ++v) {
                if (same(u, v)) continue;
                if (rel[v][u] && value[v] && (!lo || *value[v] > *lo)) lo = value[v];
                if (v > k && rel[u][v] && (!hi || consts[v - k - 1] < *hi)) hi = consts[v - k - 1];
            }
            Rational cand;
            if (!lo && !hi) cand = 0;
            else if (!lo) cand = *hi - 1;
            else if (!hi) cand = *lo + 1;
            else cand = (*lo + *hi) / 2;
            while (used.count(cand)) {
                if (!lo && !hi) cand += 1;
                else if (!lo) cand -= 1;
                else if (!hi) cand += 1;
                else cand = (*lo + cand) / 2;
            }
            fixed = cand;
        }
        used.insert(*fixed);
        for (std::size_t v = 0; v < n; ++v)
            if (same(u, v)) value[v] = fixed;
    }
    std::vector<Rational> out;
    for (std::size_t j = 0; j <= k; ++j) out.push_back(*value[j]);
    return out;
}

/// Satisfies a conjunction of membership/equality literals over a finite alphabet.
inline std::optional<std::vector<std::size_t>> solve_finite(const std::vector<Literal>& lits, const Theory& t) {
    const std::size_t k = t.lookback();
    const std::size_t m = t.alphabet().size();
    std::vector<std::vector<bool>> domain(k + 1, std::vector<bool>(m, true));
    std::vector<std::tuple<std::size_t, std::size_t, bool>> links;
    for (const auto& l : lits) {
        if (const auto* mem = std::get_if<MemberAtom>(l.atom)) {
            std::vector<bool> in(m, false);
            for (const auto& s : mem->symbols)
                if (auto i = t.letter_index(s)) in[*i] = true;
            for (std::size_t i = 0; i < m; ++i)
                if (in[i] != l.positive) domain[mem->var][i] = false;
        } else if (const auto* c = std::get_if<CompareAtom>(l.atom)) {
            bool eq = (c->op == CmpOp::Eq) == l.positive;
            links.emplace_back(std::get<Var>(c->lhs).back, std::get<Var>(c->rhs).back, eq);
        }
    }
    std::vector<std::size_t> assign(k + 1, 0);
    auto consistent = [&](std::size_t upto) {
        for (auto [a, b, eq] : links)
            if (a <= upto && b <= upto && (assign[a] == assign[b]) != eq) return false;
        return true;
    };
    auto rec = [&](auto&& self, std::size_t j) -> bool {
        if (j > k) return true;
        for (std::size_t i = 0; i < m; ++i) {
            if (!domain[j][i]) continue;
            assign[j] = i;
            if (consistent(j) && self(self, j + 1)) return true;
        }
        return false;
    };
    if (!rec(rec, 0)) return std::nullopt;
    return assign;
}

class SatSearch {
public:
    SatSearch(const Theory& t) : t_(t) {}

    std::optional<std::vector<Letter>> run(const Nnf& root) {
        std::vector<const Nnf*> agenda{&root};
        std::vector<Literal> lits;
        if (search(agenda, lits)) return witness_;
        return std::nullopt;
    }

private:
    bool search(std::vector<const Nnf*> agenda, std::vector<Literal> lits) {
        while (!agenda.empty()) {
            const Nnf* n = agenda.back();
            agenda.pop_back();
            switch (n->kind) {
            case Nnf::True: break;
            case Nnf::False: return false;
            case Nnf::Lit: lits.push_back(n->lit); break;
            case Nnf::And:
                for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) agenda.push_back(&*it);
                break;
            case Nnf::Or: {
                if (!leaf(lits, false)) return false;
                for (const auto& kid : n->kids) {
                    auto next = agenda;
                    next.push_back(&kid);
                    if (search(std::move(next), lits)) return true;
                }
                return false;
            }
            }
        }
        return leaf(lits, true);
    }

    bool leaf(const std::vector<Literal>& lits, bool final) {
        if (final && ++leaves_ > t_.minterm_budget())
            throw ResourceExhausted("satisfiability check exceeded the minterm budget of " +
                                    std::to_string(t_.minterm_budget()));
        std::uint32_t bits = 0;
        if (!track_literals_consistent(lits, bits)) return false;
        const std::size_t k = t_.lookback();
        std::vector<Letter> window;
        if (t_.kind() == TheoryKind::DenseOrder) {
            auto values = solve_order(lits, k);
            if (!values) return false;
            if (!final) return true;
            for (std::size_t i = 0; i <= k; ++i) window.emplace_back((*values)[k - i]);
        } else {
            auto idx = solve_finite(lits, t_);
            if (!idx) return false;
            if (!final) return true;
            for (std::size_t i = 0; i <= k; ++i) window.emplace_back(t_.alphabet()[(*idx)[k - i]]);
        }
        window.back() = window.back().with_tracks(bits);
        witness_ = std::move(window);
        return true;
    }

    const Theory& t_;
    std::size_t leaves_ = 0;
    std::vector<Letter> witness_;
};

inline constexpr std::size_t enumeration_limit = 256;
inline constexpr std::size_t cell_limit = 4096;

} // namespace detail

inline SatResult Theory::is_satisfiable(const Predicate& p) const {
    if (!can_decide_sat())
        throw CapabilityMissing("theory " + describe() + " cannot decide satisfiability");
    if (p.is_false()) return {};
    if (kind_ == TheoryKind::Finite && window_space() <= detail::enumeration_limit) {
        SatResult result;
        for_each_window([&](std::span<const Letter> w) {
            if (!winex::eval(p, w)) return false;
            result = {true, LookbackValuation(std::vector<Letter>(w.begin(), w.end()))};
            return true;
        });
        return result;
    }
    if (kind_ == TheoryKind::DenseOrder) {
        const Predicate one[] = {p};
        if (auto cells = detail::order_cells(k_, tracks_, detail::constants_of(one), detail::cell_limit)) {
            for (auto& w : *cells)
                if (winex::eval(p, w)) return {true, LookbackValuation(std::move(w))};
            return {};
        }
    }
    detail::Nnf root = detail::to_nnf(p, true);
    detail::SatSearch search(*this);
    if (auto w = search.run(root)) return {true, LookbackValuation(std::move(*w))};
    return {};
}

namespace detail {

inline Predicate nnf_to_predicate(const Nnf& n, const Theory& t) {
    switch (n.kind) {
    case Nnf::True: return Predicate::top();
    case Nnf::False: return Predicate::bottom();
    case Nnf::Lit: {
        if (const auto* c = std::get_if<CompareAtom>(n.lit.atom); c && !n.lit.positive)
            return Predicate::compare(c->lhs, negate(c->op), c->rhs);
        Predicate a = Predicate::atom(*n.lit.atom);
        return n.lit.positive ? a : make_not(a);
    }
    case Nnf::And:
    case Nnf::Or: {
        std::vector<Predicate> kids;
        for (const auto& k : n.kids) {
            Predicate c = nnf_to_predicate(k, t);
            if (n.kind == Nnf::Or && t.can_decide_sat() && !t.satisfiable(c)) continue;
            kids.push_back(std::move(c));
        }
        return n.kind == Nnf::And ? make_and(kids) : make_or(kids);
    }
    }
    return Predicate::bottom();
}

} // namespace detail

inline Predicate Theory::from_truth_table(const std::vector<char>& table) const {
    if (kind_ != TheoryKind::Finite || alphabet().size() > 64)
        throw CapabilityMissing("truth tables need a finite theory with at most 64 letters");
    const std::size_t dims = k_ + 1 + tracks_;
    using Box = std::vector<std::uint64_t>;
    std::vector<Box> boxes;
    std::size_t index = 0;
    for_each_window([&](std::span<const Letter> w) {
        if (!table.at(index++)) return;
        Box b(dims);
        for (std::size_t j = 0; j <= k_; ++j) b[j] = std::uint64_t{1} << *letter_index(w[k_ - j].as_symbol());
        for (unsigned t = 0; t < tracks_; ++t) b[k_ + 1 + t] = std::uint64_t{1} << (w[k_].track(t) ? 1 : 0);
        boxes.push_back(std::move(b));
    });
    if (boxes.empty()) return Predicate::bottom();
    if (boxes.size() == index) return Predicate::top();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t d = 0; d < dims; ++d) {
            std::map<Box, std::uint64_t> merged;
            for (auto& b : boxes) {
                std::uint64_t mask = b[d];
                b[d] = 0;
                merged[b] |= mask;
            }
            if (merged.size() != boxes.size()) changed = true;
            boxes.clear();
            for (auto& [key, mask] : merged) {
                Box b = key;
                b[d] = mask;
                boxes.push_back(std::move(b));
            }
        }
    }
    std::sort(boxes.begin(), boxes.end());
    const std::size_t m = alphabet().size();
    const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    std::vector<Predicate> terms;
    for (const auto& b : boxes) {
        std::vector<Predicate> lits;
        for (std::size_t j = k_ + 1; j-- > 0;) {
            if (b[j] == full) continue;
            std::vector<std::string> syms;
            for (std::size_t i = 0; i < m; ++i)
                if ((b[j] >> i) & 1u) syms.push_back(alphabet()[i]);
            lits.push_back(Predicate::member(j, std::move(syms)));
        }
        for (unsigned t = 0; t < tracks_; ++t) {
            std::uint64_t mask = b[k_ + 1 + t];
            if (mask == 1) lits.push_back(make_not(Predicate::track(t)));
            if (mask == 2) lits.push_back(Predicate::track(t));
        }
        terms.push_back(make_and(lits));
    }
    return make_or(terms);
}

inline Predicate Theory::simplify(const Predicate& p) const {
    if (p.is_true() || p.is_false()) return p;
    if (kind_ == TheoryKind::Finite && tabulable()) {
        std::vector<char> table;
        table.reserve(window_space());
        for_each_window([&](std::span<const Letter> w) { table.push_back(winex::eval(p, w) ? 1 : 0); });
        return from_truth_table(table);
    }
    if (!can_decide_sat()) return p;
    if (kind_ == TheoryKind::DenseOrder) {
        const Predicate one[] = {p};
        const auto atoms = detail::atoms_of(one);
        if (auto cells = detail::order_cells(k_, tracks_, detail::constants_of(one), detail::cell_limit)) {
            std::set<std::vector<char>> on, off;
            for (const auto& w : *cells) (winex::eval(p, w) ? on : off).insert(detail::atom_vector(atoms, w));
            return detail::cover(atoms, on, off);
        }
    }
    if (!satisfiable(p)) return Predicate::bottom();
    if (!satisfiable(make_not(p))) return Predicate::top();
    return detail::nnf_to_predicate(detail::to_nnf(p, true), *this);
}

} // namespace winex

#endif // WINEX_THEORY_HPP
