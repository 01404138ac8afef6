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

#ifndef WINEX_KSLA_OPS_HPP
#define WINEX_KSLA_OPS_HPP

#include <cstddef>
#include <deque>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "winex/error.hpp"
#include "winex/ksla.hpp"
#include "winex/theory.hpp"

namespace winex {

/// Simplifies a guard when the theory can; unsatisfiable guards become false.
inline Predicate tidy(const Theory& t, const Predicate& p) {
    if (!t.can_decide_sat()) return p;
    return t.simplify(p);
}

inline void require_same_theory(const Ksla& a, const Ksla& b) {
    if (!(a.theory() == b.theory()))
        throw TheoryMismatch("automata over different theories: " + a.theory().describe() + " vs " +
                             b.theory().describe());
}

/// Single final state looping on true: every word of length at least k.
inline Ksla universal(const Theory& t) {
    Ksla a(t, 1);
    a.set_final(0);
    a.add_edge(0, 0, Predicate::top());
    a.mark_deterministic();
    return a;
}

inline Ksla empty_language(const Theory& t) {
    Ksla a(t, 1);
    a.mark_deterministic();
    return a;
}

/// Words of length exactly k+1 whose window satisfies p.
inline Ksla single_predicate(const Theory& t, const Predicate& p) {
    Ksla a(t, 2);
    a.set_final(1);
    a.add_edge(0, 1, p);
    a.mark_deterministic();
    return a;
}

inline std::vector<bool> reachable(const Ksla& a) {
    std::vector<bool> seen(a.size(), false);
    if (a.size() == 0) return seen;
    std::vector<StateId> stack{a.initial()};
    seen[a.initial()] = true;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (const auto& e : a.out(q))
            if (!seen[e.to]) {
                seen[e.to] = true;
                stack.push_back(e.to);
            }
    }
    return seen;
}

/// States from which no final state is reachable; indexed by state.
inline std::vector<bool> dead_mask(const Ksla& a) {
    std::vector<std::vector<StateId>> rev(a.size());
    for (StateId q = 0; q < a.size(); ++q)
        for (const auto& e : a.out(q)) rev[e.to].push_back(q);
    std::vector<bool> live(a.size(), false);
    std::vector<StateId> stack = a.finals();
    for (StateId f : stack) live[f] = true;
    while (!stack.empty()) {
        StateId q = stack.back();
        stack.pop_back();
        for (StateId p : rev[q])
            if (!live[p]) {
                live[p] = true;
                stack.push_back(p);
            }
    }
    std::vector<bool> dead(a.size());
    for (StateId q = 0; q < a.size(); ++q) dead[q] = !live[q];
    return dead;
}

inline std::vector<StateId> dead_states(const Ksla& a) {
    std::vector<StateId> out;
    auto dead = dead_mask(a);
    for (StateId q = 0; q < a.size(); ++q)
        if (dead[q]) out.push_back(q);
    return out;
}

/// Keeps the states selected by `keep` (the initial state always survives), renumbered in order.
inline Ksla restrict_states(const Ksla& a, const std::vector<bool>& keep) {
    Ksla out(a.theory());
    std::vector<StateId> map(a.size(), a.size());
    for (StateId q = 0; q < a.size(); ++q)
        if (keep[q] || q == a.initial()) {
            map[q] = out.add_state(a.is_final(q));
            out.set_name(map[q], a.name(q));
        }
    for (StateId q = 0; q < a.size(); ++q) {
        if (map[q] == a.size()) continue;
        for (const auto& e : a.out(q))
            if (map[e.to] != a.size()) out.add_edge(map[q], map[e.to], e.guard);
    }
    out.set_initial(map[a.initial()]);
    out.mark_deterministic(a.deterministic());
    return out;
}

inline Ksla trim(const Ksla& a) { return restrict_states(a, reachable(a)); }

/// Drops unsatisfiable guards (sat-capable theories) and unreachable states.
inline Ksla clean(const Ksla& a) {
    Ksla b = a;
    if (a.theory().can_decide_sat())
        for (StateId q = 0; q < a.size(); ++q)
            for (const auto& e : a.out(q))
                if (!a.theory().satisfiable(e.guard)) b.set_edge(q, e.to, Predicate::bottom());
    return trim(b);
}

inline bool is_clean(const Ksla& a) {
    for (StateId q = 0; q < a.size(); ++q)
        for (const auto& e : a.out(q))
            if (e.guard.is_false() || !a.theory().satisfiable(e.guard)) return false;
    return true;
}

/// Certificate check: out-guards of every state are pairwise unsatisfiable.
inline bool certify_deterministic(const Ksla& a) {
    const Theory& t = a.theory();
    if (!t.can_decide_sat()) throw CapabilityMissing("cannot certify determinism over " + t.describe());
    for (StateId q = 0; q < a.size(); ++q) {
        const auto& out = a.out(q);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (t.satisfiable(make_and({out[i].guard, out[j].guard}))) return false;
    }
    return true;
}

struct DeterminizeOptions {
    std::size_t max_out_degree = 20;
    std::size_t max_states = 1u << 16;
    /// Build syntactic minterms without satisfiability pruning (evaluation-only theories).
    bool allow_unchecked = false;
};

/// Subset construction. The result is complete: windows leaving every member state lead
/// to an explicit empty-set trap.
inline Ksla determinize(const Ksla& a, const DeterminizeOptions& opt = {}) {
    const Theory& t = a.theory();
    const bool checked = t.can_decide_sat();
    if (!checked && !opt.allow_unchecked)
        throw CapabilityMissing("determinization needs satisfiability, unavailable in " + t.describe());
    Ksla d(t);
    std::map<std::vector<StateId>, StateId> index;
    std::deque<std::pair<std::vector<StateId>, StateId>> queue;
    auto intern = [&](const std::vector<StateId>& set) {
        auto it = index.find(set);
        if (it != index.end()) return it->second;
        if (index.size() >= opt.max_states)
            throw ResourceExhausted("determinization exceeded " + std::to_string(opt.max_states) + " states");
        bool fin = false;
        for (StateId q : set) fin = fin || a.is_final(q);
        StateId id = d.add_state(fin);
        index.emplace(set, id);
        queue.emplace_back(set, id);
        return id;
    };
    d.set_initial(intern({a.initial()}));

    while (!queue.empty()) {
        auto [set, id] = queue.front();
        queue.pop_front();
        std::map<StateId, std::vector<Predicate>> by_target;
        for (StateId q : set)
            for (const auto& e : a.out(q)) by_target[e.to].push_back(e.guard);
        std::vector<std::pair<StateId, Predicate>> outs;
        for (auto& [to, gs] : by_target) outs.emplace_back(to, make_or(gs));

        if (t.tabulable()) {
            std::map<std::vector<StateId>, std::vector<char>> groups;
            const std::size_t space = t.window_space();
            std::size_t i = 0;
            t.for_each_window([&](std::span<const Letter> w) {
                std::vector<StateId> target;
                for (const auto& [to, g] : outs)
                    if (eval(g, w)) target.push_back(to);
                auto& table = groups[target];
                if (table.empty()) table.assign(space, 0);
                table[i++] = 1;
            });
            for (const auto& [target, table] : groups) {
                StateId to = intern(target);
                d.add_edge(id, to, t.from_truth_table(table));
            }
            continue;
        }

        if (t.kind() == TheoryKind::DenseOrder) {
            std::vector<Predicate> gs;
            for (const auto& o : outs) gs.push_back(o.second);
            const auto atoms = detail::atoms_of(gs);
            auto cells = detail::order_cells(t.lookback(), t.tracks(), detail::constants_of(gs), detail::cell_limit);
            if (cells) {
                std::map<std::vector<char>, std::vector<StateId>> realized;
                for (const auto& w : *cells) {
                    auto v = detail::atom_vector(atoms, w);
                    if (realized.count(v)) continue;
                    std::vector<StateId> target;
                    for (const auto& [to, g] : outs)
                        if (eval(g, w)) target.push_back(to);
                    realized.emplace(std::move(v), std::move(target));
                }
                std::map<std::vector<StateId>, std::set<std::vector<char>>> on;
                for (const auto& [v, target] : realized) on[target].insert(v);
                for (const auto& [target, vs] : on) {
                    std::set<std::vector<char>> off;
                    for (const auto& [v, other] : realized)
                        if (other != target) off.insert(v);
                    d.add_edge(id, intern(target), detail::cover(atoms, vs, off));
                }
                continue;
            }
        }

        if (outs.size() > opt.max_out_degree)
            throw ResourceExhausted("out-degree " + std::to_string(outs.size()) + " exceeds the ceiling of " +
                                    std::to_string(opt.max_out_degree));
        std::vector<Predicate> lits;
        std::vector<StateId> target;
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (checked && !lits.empty() && !t.satisfiable(make_and(lits))) return;
            if (i == outs.size()) {
                Predicate g = checked ? tidy(t, make_and(lits)) : make_and(lits);
                if (g.is_false()) return;
                StateId to = intern(target);
                d.add_edge(id, to, g);
                if (checked) d.set_edge(id, to, tidy(t, d.guard(id, to)));
                return;
            }
            lits.push_back(outs[i].second);
            target.push_back(outs[i].first);
            self(self, i + 1);
            target.pop_back();
            lits.back() = make_not(outs[i].second);
            self(self, i + 1);
            lits.pop_back();
        };
        rec(rec, 0);
    }
    d.mark_deterministic();
    return d;
}

/// Accepts the words of length at least k+1 that `a` rejects; a length-k word is accepted
/// iff the initial state of the determinized input is not final.
inline Ksla complement(const Ksla& a, const DeterminizeOptions& opt = {}) {
    Ksla d = determinize(a, opt);
    for (StateId q = 0; q < d.size(); ++q) d.set_final(q, !d.is_final(q));
    return d;
}

/// Reachable product; `pairs`, when given, receives the component states of each product state.
inline Ksla product_intersect(const Ksla& a, const Ksla& b,
                              std::vector<std::pair<StateId, StateId>>* pairs = nullptr) {
    require_same_theory(a, b);
    const Theory& t = a.theory();
    Ksla p(t);
    std::map<std::pair<StateId, StateId>, StateId> index;
    std::deque<std::pair<StateId, StateId>> queue;
    auto intern = [&](StateId x, StateId y) {
        auto [it, fresh] = index.emplace(std::pair(x, y), p.size());
        if (fresh) {
            p.add_state(a.is_final(x) && b.is_final(y));
            queue.emplace_back(x, y);
        }
        return it->second;
    };
    p.set_initial(intern(a.initial(), b.initial()));
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        StateId from = index.at({x, y});
        for (const auto& ea : a.out(x))
            for (const auto& eb : b.out(y)) {
                Predicate g = tidy(t, make_and({ea.guard, eb.guard}));
                if (g.is_false()) continue;
                p.add_edge(from, intern(ea.to, eb.to), g);
            }
    }
    p.mark_deterministic(a.deterministic() && b.deterministic());
    if (pairs) {
        pairs->assign(p.size(), {});
        for (const auto& [key, id] : index) (*pairs)[id] = key;
    }
    return p;
}

namespace detail {

inline StateId copy_into(Ksla& dst, const Ksla& src) {
    StateId offset = dst.size();
    for (StateId q = 0; q < src.size(); ++q) dst.add_state(src.is_final(q));
    for (StateId q = 0; q < src.size(); ++q)
        for (const auto& e : src.out(q)) dst.add_edge(offset + q, offset + e.to, e.guard);
    return offset;
}

} // namespace detail

/// Language union via a fresh initial state copying both initial out-edges.
inline Ksla unite(const Ksla& a, const Ksla& b) {
    require_same_theory(a, b);
    Ksla u(a.theory());
    StateId init = u.add_state(a.is_final(a.initial()) || b.is_final(b.initial()));
    StateId oa = detail::copy_into(u, a);
    StateId ob = detail::copy_into(u, b);
    for (const auto& e : a.out(a.initial())) u.add_edge(init, oa + e.to, e.guard);
    for (const auto& e : b.out(b.initial())) u.add_edge(init, ob + e.to, e.guard);
    u.set_initial(init);
    return trim(u);
}

/// k-concatenation: words u v u' with |v| = k, uv accepted by a and vu' accepted by b.
inline Ksla concat_k(const Ksla& a, const Ksla& b) {
    require_same_theory(a, b);
    Ksla c(a.theory());
    StateId oa = detail::copy_into(c, a);
    StateId ob = detail::copy_into(c, b);
    const bool b_takes_empty = b.is_final(b.initial());
    for (StateId q = 0; q < a.size(); ++q) {
        c.set_final(oa + q, a.is_final(q) && b_takes_empty);
        if (!a.is_final(q)) continue;
        for (const auto& e : b.out(b.initial())) c.add_edge(oa + q, ob + e.to, e.guard);
    }
    c.set_initial(oa + a.initial());
    return trim(c);
}

/// Kleene star with the empty power read as the k-letter words.
inline Ksla star(const Ksla& a) {
    Ksla s(a.theory());
    StateId init = s.add_state(true);
    StateId oa = detail::copy_into(s, a);
    for (const auto& e : a.out(a.initial())) {
        s.add_edge(init, oa + e.to, e.guard);
        for (StateId f : a.finals()) s.add_edge(oa + f, oa + e.to, e.guard);
    }
    s.set_initial(init);
    return trim(s);
}

/// Erases track t: each guard g becomes g[t:=0] || g[t:=1].
inline Ksla project_track(const Ksla& a, unsigned t) {
    Ksla p(a.theory());
    for (StateId q = 0; q < a.size(); ++q) p.add_state(a.is_final(q));
    for (StateId q = 0; q < a.size(); ++q)
        for (const auto& e : a.out(q)) {
            Predicate g = make_or({substitute_track(e.guard, t, false), substitute_track(e.guard, t, true)});
            p.add_edge(q, e.to, tidy(a.theory(), g));
        }
    p.set_initial(a.initial());
    return p;
}

/// Fixes track t to a constant in every guard, dropping edges that become false.
inline Ksla fix_track(const Ksla& a, unsigned t, bool value) {
    Ksla p(a.theory());
    for (StateId q = 0; q < a.size(); ++q) p.add_state(a.is_final(q));
    for (StateId q = 0; q < a.size(); ++q)
        for (const auto& e : a.out(q)) p.add_edge(q, e.to, tidy(a.theory(), substitute_track(e.guard, t, value)));
    p.set_initial(a.initial());
    p.mark_deterministic(a.deterministic());
    return p;
}

} // namespace winex

#endif // WINEX_KSLA_OPS_HPP
