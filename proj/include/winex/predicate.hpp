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

#ifndef WINEX_PREDICATE_HPP
#define WINEX_PREDICATE_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "winex/error.hpp"
#include "winex/letter.hpp"
#include "winex/rational.hpp"

namespace winex {

enum class CmpOp { Lt, Le, Eq, Ne, Gt, Ge };

inline CmpOp negate(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Eq: return CmpOp::Ne;
    case CmpOp::Ne: return CmpOp::Eq;
    case CmpOp::Gt: return CmpOp::Le;
    case CmpOp::Ge: return CmpOp::Lt;
    }
    return op;
}

/// op such that (a op b) <=> (b swapped(op) a).
inline CmpOp swapped(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return CmpOp::Gt;
    case CmpOp::Le: return CmpOp::Ge;
    case CmpOp::Gt: return CmpOp::Lt;
    case CmpOp::Ge: return CmpOp::Le;
    default: return op;
    }
}

template <class T>
bool apply(CmpOp op, const T& a, const T& b) {
    switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Gt: return a > b;
    case CmpOp::Ge: return a >= b;
    }
    return false;
}

/// Lookback variable x_{-back}.
struct Var {
    std::size_t back = 0;
    friend bool operator==(const Var&, const Var&) = default;
};

using Operand = std::variant<Var, Rational>;

/// x_{-var} in {symbols}. Symbols are kept sorted and unique.
struct MemberAtom {
    std::size_t var = 0;
    std::vector<std::string> symbols;
    friend bool operator==(const MemberAtom&, const MemberAtom&) = default;
};

/// Order or equality comparison between lookback variables and rational constants.
struct CompareAtom {
    Operand lhs;
    CmpOp op = CmpOp::Eq;
    Operand rhs;
    friend bool operator==(const CompareAtom&, const CompareAtom&) = default;
};

/// Boolean track bit of the current letter (theory extension).
struct TrackAtom {
    unsigned track = 0;
    friend bool operator==(const TrackAtom&, const TrackAtom&) = default;
};

/// min(x_{-a1} .. x_{-b1}) op min(x_{-a2} .. x_{-b2}), with a >= b. Evaluation only.
struct RangeMinAtom {
    std::size_t from1 = 0, to1 = 0;
    CmpOp op = CmpOp::Eq;
    std::size_t from2 = 0, to2 = 0;
    friend bool operator==(const RangeMinAtom&, const RangeMinAtom&) = default;
};

using Atom = std::variant<MemberAtom, CompareAtom, TrackAtom, RangeMinAtom>;

enum class NodeKind { True, False, Atom, Not, And, Or };

class Predicate;

namespace detail {

struct PredicateNode {
    NodeKind kind;
    Atom atom;
    std::vector<Predicate> children;
    std::size_t hash = 0;
};

} // namespace detail

/// Immutable boolean combination of atoms over lookback variables. Copies share structure.
class Predicate {
public:
    Predicate() : node_(true_node()) {}

    static Predicate top() { return Predicate(true_node()); }
    static Predicate bottom() { return Predicate(false_node()); }
    static Predicate atom(Atom a);
    static Predicate member(std::size_t var, std::vector<std::string> symbols);
    static Predicate compare(Operand lhs, CmpOp op, Operand rhs) {
        return atom(CompareAtom{std::move(lhs), op, std::move(rhs)});
    }
    static Predicate track(unsigned t) { return atom(TrackAtom{t}); }

    NodeKind kind() const noexcept { return node_->kind; }
    bool is_true() const noexcept { return kind() == NodeKind::True; }
    bool is_false() const noexcept { return kind() == NodeKind::False; }
    const Atom& as_atom() const { return node_->atom; }
    const std::vector<Predicate>& children() const noexcept { return node_->children; }
    std::size_t hash() const noexcept { return node_->hash; }

    friend bool operator==(const Predicate& a, const Predicate& b);
    friend bool operator!=(const Predicate& a, const Predicate& b) { return !(a == b); }

    /// Structural order, used for canonical sorting only.
    friend bool structurally_less(const Predicate& a, const Predicate& b);

private:
    friend Predicate make_node(NodeKind, std::vector<Predicate>);
    explicit Predicate(std::shared_ptr<const detail::PredicateNode> n) : node_(std::move(n)) {}

    static const std::shared_ptr<const detail::PredicateNode>& true_node() {
        static const auto n = std::make_shared<const detail::PredicateNode>(
            detail::PredicateNode{NodeKind::True, Atom{}, {}, 0x51});
        return n;
    }
    static const std::shared_ptr<const detail::PredicateNode>& false_node() {
        static const auto n = std::make_shared<const detail::PredicateNode>(
            detail::PredicateNode{NodeKind::False, Atom{}, {}, 0x52});
        return n;
    }

    std::shared_ptr<const detail::PredicateNode> node_;
};

namespace detail {

inline std::size_t hash_operand(const Operand& o) {
    if (const Var* v = std::get_if<Var>(&o)) return boost::hash_value(v->back) * 31 + 7;
    std::size_t h = 0;
    const Rational& r = std::get<Rational>(o);
    boost::hash_combine(h, numerator(r).str());
    boost::hash_combine(h, denominator(r).str());
    return h;
}

inline std::size_t hash_atom(const Atom& a) {
    std::size_t h = a.index() * 0x9e3779b9u;
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, MemberAtom>) {
                boost::hash_combine(h, x.var);
                for (const auto& s : x.symbols) boost::hash_combine(h, s);
            } else if constexpr (std::is_same_v<T, CompareAtom>) {
                boost::hash_combine(h, hash_operand(x.lhs));
                boost::hash_combine(h, static_cast<int>(x.op));
                boost::hash_combine(h, hash_operand(x.rhs));
            } else if constexpr (std::is_same_v<T, TrackAtom>) {
                boost::hash_combine(h, x.track);
            } else {
                boost::hash_combine(h, x.from1);
                boost::hash_combine(h, x.to1);
                boost::hash_combine(h, static_cast<int>(x.op));
                boost::hash_combine(h, x.from2);
                boost::hash_combine(h, x.to2);
            }
        },
        a);
    return h;
}

} // namespace detail

inline Predicate make_node(NodeKind kind, std::vector<Predicate> children) {
    std::size_t h = static_cast<std::size_t>(kind) * 0x27d4eb2d;
    for (const auto& c : children) boost::hash_combine(h, c.hash());
    return Predicate(std::make_shared<const detail::PredicateNode>(
        detail::PredicateNode{kind, Atom{}, std::move(children), h}));
}

inline Predicate Predicate::atom(Atom a) {
    if (auto* m = std::get_if<MemberAtom>(&a)) {
        std::sort(m->symbols.begin(), m->symbols.end());
        m->symbols.erase(std::unique(m->symbols.begin(), m->symbols.end()), m->symbols.end());
    }
    std::size_t h = detail::hash_atom(a);
    return Predicate(std::make_shared<const detail::PredicateNode>(
        detail::PredicateNode{NodeKind::Atom, std::move(a), {}, h}));
}

inline Predicate Predicate::member(std::size_t var, std::vector<std::string> symbols) {
    return atom(MemberAtom{var, std::move(symbols)});
}

inline bool operator==(const Predicate& a, const Predicate& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind) return false;
    if (a.kind() == NodeKind::Atom) return a.node_->atom == b.node_->atom;
    return a.node_->children == b.node_->children;
}

namespace detail {

inline int compare_operand(const Operand& a, const Operand& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    if (const Var* va = std::get_if<Var>(&a)) {
        const Var& vb = std::get<Var>(b);
        return va->back == vb.back ? 0 : (va->back < vb.back ? -1 : 1);
    }
    const Rational& ra = std::get<Rational>(a);
    const Rational& rb = std::get<Rational>(b);
    return ra == rb ? 0 : (ra < rb ? -1 : 1);
}

inline int compare_atom(const Atom& a, const Atom& b) {
    if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
    auto cmp = [](const auto& x, const auto& y) { return x == y ? 0 : (x < y ? -1 : 1); };
    if (auto* m = std::get_if<MemberAtom>(&a)) {
        const auto& n = std::get<MemberAtom>(b);
        if (int c = cmp(m->var, n.var)) return c;
        return cmp(m->symbols, n.symbols);
    }
    if (auto* c1 = std::get_if<CompareAtom>(&a)) {
        const auto& c2 = std::get<CompareAtom>(b);
        if (int c = compare_operand(c1->lhs, c2.lhs)) return c;
        if (int c = cmp(static_cast<int>(c1->op), static_cast<int>(c2.op))) return c;
        return compare_operand(c1->rhs, c2.rhs);
    }
    if (auto* t = std::get_if<TrackAtom>(&a)) return cmp(t->track, std::get<TrackAtom>(b).track);
    const auto& r1 = std::get<RangeMinAtom>(a);
    const auto& r2 = std::get<RangeMinAtom>(b);
    return cmp(std::tuple(r1.from1, r1.to1, static_cast<int>(r1.op), r1.from2, r1.to2),
               std::tuple(r2.from1, r2.to1, static_cast<int>(r2.op), r2.from2, r2.to2));
}

inline int compare_predicate(const Predicate& a, const Predicate& b) {
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    if (a.kind() == NodeKind::Atom) return compare_atom(a.as_atom(), b.as_atom());
    const auto& ca = a.children();
    const auto& cb = b.children();
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i)
        if (int c = compare_predicate(ca[i], cb[i])) return c;
    return ca.size() == cb.size() ? 0 : (ca.size() < cb.size() ? -1 : 1);
}

} // namespace detail

inline bool structurally_less(const Predicate& a, const Predicate& b) {
    return detail::compare_predicate(a, b) < 0;
}

// Smart constructors. They fold constants, flatten nested connectives and drop
// duplicate operands, so printing then parsing reproduces the same tree.

inline Predicate make_not(const Predicate& p) {
    switch (p.kind()) {
    case NodeKind::True: return Predicate::bottom();
    case NodeKind::False: return Predicate::top();
    case NodeKind::Not: return p.children().front();
    default: return make_node(NodeKind::Not, {p});
    }
}

namespace detail {

inline Predicate make_nary(NodeKind kind, std::span<const Predicate> args) {
    const NodeKind unit = kind == NodeKind::And ? NodeKind::True : NodeKind::False;
    const NodeKind absorbing = kind == NodeKind::And ? NodeKind::False : NodeKind::True;
    std::vector<Predicate> flat;
    auto push = [&](const Predicate& p) {
        for (const auto& q : flat)
            if (q == p) return;
        flat.push_back(p);
    };
    for (const auto& a : args) {
        if (a.kind() == absorbing) return a;
        if (a.kind() == unit) continue;
        if (a.kind() == kind) {
            for (const auto& c : a.children()) push(c);
        } else {
            push(a);
        }
    }
    if (flat.empty()) return kind == NodeKind::And ? Predicate::top() : Predicate::bottom();
    if (flat.size() == 1) return flat.front();
    return make_node(kind, std::move(flat));
}

} // namespace detail

inline Predicate make_and(std::span<const Predicate> args) { return detail::make_nary(NodeKind::And, args); }
inline Predicate make_or(std::span<const Predicate> args) { return detail::make_nary(NodeKind::Or, args); }
inline Predicate make_and(std::initializer_list<Predicate> args) {
    return make_and(std::span<const Predicate>(args.begin(), args.size()));
}
inline Predicate make_or(std::initializer_list<Predicate> args) {
    return make_or(std::span<const Predicate>(args.begin(), args.size()));
}

inline Predicate operator&&(const Predicate& a, const Predicate& b) { return make_and({a, b}); }
inline Predicate operator||(const Predicate& a, const Predicate& b) { return make_or({a, b}); }
inline Predicate operator!(const Predicate& a) { return make_not(a); }

/// Largest lookback index mentioned by the predicate (0 when none).
inline std::size_t max_var(const Predicate& p) {
    std::size_t m = 0;
    auto operand = [&](const Operand& o) {
        if (const Var* v = std::get_if<Var>(&o)) m = std::max(m, v->back);
    };
    if (p.kind() == NodeKind::Atom) {
        std::visit(
            [&](const auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, MemberAtom>) m = std::max(m, a.var);
                else if constexpr (std::is_same_v<T, CompareAtom>) { operand(a.lhs); operand(a.rhs); }
                else if constexpr (std::is_same_v<T, RangeMinAtom>) m = std::max({m, a.from1, a.from2});
            },
            p.as_atom());
    }
    for (const auto& c : p.children()) m = std::max(m, max_var(c));
    return m;
}

/// Visits every atom in the tree.
template <class F>
void for_each_atom(const Predicate& p, F&& f) {
    if (p.kind() == NodeKind::Atom) {
        f(p.as_atom());
        return;
    }
    for (const auto& c : p.children()) for_each_atom(c, f);
}

/// Replaces track atom t by a constant.
inline Predicate substitute_track(const Predicate& p, unsigned t, bool value) {
    switch (p.kind()) {
    case NodeKind::True:
    case NodeKind::False: return p;
    case NodeKind::Atom:
        if (const auto* tr = std::get_if<TrackAtom>(&p.as_atom()); tr && tr->track == t)
            return value ? Predicate::top() : Predicate::bottom();
        return p;
    case NodeKind::Not: return make_not(substitute_track(p.children().front(), t, value));
    case NodeKind::And:
    case NodeKind::Or: {
        std::vector<Predicate> cs;
        cs.reserve(p.children().size());
        bool changed = false;
        for (const auto& c : p.children()) {
            cs.push_back(substitute_track(c, t, value));
            changed = changed || !(cs.back() == c);
        }
        if (!changed) return p;
        return p.kind() == NodeKind::And ? make_and(cs) : make_or(cs);
    }
    }
    return p;
}

namespace detail {

inline const Letter& lookback(std::span<const Letter> window, std::size_t back) {
    if (back >= window.size())
        throw MalformedPredicate("predicate references x-" + std::to_string(back) +
                                 " but only " + std::to_string(window.size()) + " letters are visible");
    return window[window.size() - 1 - back];
}

inline const Rational& number_of(const Letter& l) {
    if (!l.is_number()) throw InputTypeError("numeric comparison on symbol '" + l.to_string() + "'");
    return l.as_number();
}

inline bool eval_atom(const Atom& atom, std::span<const Letter> window) {
    return std::visit(
        [&](const auto& a) -> bool {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, MemberAtom>) {
                const Letter& l = lookback(window, a.var);
                if (!l.is_symbol()) return false;
                return std::binary_search(a.symbols.begin(), a.symbols.end(), l.as_symbol());
            } else if constexpr (std::is_same_v<T, CompareAtom>) {
                const Var* lv = std::get_if<Var>(&a.lhs);
                const Var* rv = std::get_if<Var>(&a.rhs);
                if (lv && rv) {
                    const Letter& x = lookback(window, lv->back);
                    const Letter& y = lookback(window, rv->back);
                    if (x.is_symbol() && y.is_symbol()) {
                        if (a.op == CmpOp::Eq) return x.as_symbol() == y.as_symbol();
                        if (a.op == CmpOp::Ne) return x.as_symbol() != y.as_symbol();
                        return apply(a.op, x.as_symbol(), y.as_symbol());
                    }
                    return apply(a.op, number_of(x), number_of(y));
                }
                const Rational& x = lv ? number_of(lookback(window, lv->back)) : std::get<Rational>(a.lhs);
                const Rational& y = rv ? number_of(lookback(window, rv->back)) : std::get<Rational>(a.rhs);
                return apply(a.op, x, y);
            } else if constexpr (std::is_same_v<T, TrackAtom>) {
                return window.back().track(a.track);
            } else {
                auto range_min = [&](std::size_t from, std::size_t to) {
                    Rational m = number_of(lookback(window, from));
                    for (std::size_t j = to; j < from; ++j) m = std::min(m, number_of(lookback(window, j)));
                    return m;
                };
                return apply(a.op, range_min(a.from1, a.to1), range_min(a.from2, a.to2));
            }
        },
        atom);
}

} // namespace detail

/// Standard boolean semantics; window holds x_{-k} .. x_0, oldest first.
inline bool eval(const Predicate& p, std::span<const Letter> window) {
    switch (p.kind()) {
    case NodeKind::True: return true;
    case NodeKind::False: return false;
    case NodeKind::Atom: return detail::eval_atom(p.as_atom(), window);
    case NodeKind::Not: return !eval(p.children().front(), window);
    case NodeKind::And:
        for (const auto& c : p.children())
            if (!eval(c, window)) return false;
        return true;
    case NodeKind::Or:
        for (const auto& c : p.children())
            if (eval(c, window)) return true;
        return false;
    }
    return false;
}

inline std::size_t atom_count(const Predicate& p) {
    std::size_t n = 0;
    for_each_atom(p, [&](const Atom&) { ++n; });
    return n;
}

} // namespace winex

template <>
struct std::hash<winex::Predicate> {
    std::size_t operator()(const winex::Predicate& p) const noexcept { return p.hash(); }
};

#endif // WINEX_PREDICATE_HPP
