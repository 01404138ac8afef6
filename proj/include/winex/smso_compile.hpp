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

#ifndef WINEX_SMSO_COMPILE_HPP
#define WINEX_SMSO_COMPILE_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "winex/ksla.hpp"
#include "winex/ksla_json.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/smso.hpp"
#include "winex/window_expression.hpp"

namespace winex {

namespace detail {

inline constexpr unsigned begin_track = 0;
inline constexpr unsigned end_track = 1;

inline std::size_t quantifier_depth(const Formula& f) {
    std::size_t d = 0;
    for (const auto& c : f.children()) d = std::max(d, quantifier_depth(c));
    if (f.kind() == Formula::Kind::ExistsFirst || f.kind() == Formula::Kind::ExistsSecond) ++d;
    return d;
}

class FormulaCompiler {
public:
    FormulaCompiler(const Theory& extended, const DeterminizeOptions& opt) : t_(extended), opt_(opt) {}

    Ksla compile(const Formula& f, std::map<std::string, unsigned>& env, unsigned depth) {
        using K = Formula::Kind;
        switch (f.kind()) {
        case K::True: return universal(t_);
        case K::False: return empty_language(t_);
        case K::PredAt: {
            Predicate x = Predicate::track(env.at(f.first()));
            Ksla a(t_, 2);
            a.set_final(1);
            a.add_edge(0, 0, !x);
            a.add_edge(0, 1, x && f.predicate());
            a.add_edge(1, 1, !x);
            a.mark_deterministic();
            return a;
        }
        case K::Less: {
            if (f.first() == f.second()) return empty_language(t_);
            Predicate x = Predicate::track(env.at(f.first()));
            Predicate y = Predicate::track(env.at(f.second()));
            Ksla a(t_, 3);
            a.set_final(2);
            a.add_edge(0, 0, !x && !y);
            a.add_edge(0, 1, x && !y);
            a.add_edge(1, 1, !x && !y);
            a.add_edge(1, 2, !x && y);
            a.add_edge(2, 2, !x && !y);
            a.mark_deterministic();
            return a;
        }
        case K::In: {
            Predicate set = Predicate::track(env.at(f.first()));
            Predicate x = Predicate::track(env.at(f.second()));
            Ksla a(t_, 2);
            a.set_final(1);
            a.add_edge(0, 0, !x);
            a.add_edge(0, 1, x && set);
            a.add_edge(1, 1, !x);
            a.mark_deterministic();
            return a;
        }
        case K::Not: return complement(compile(f.body(), env, depth), opt_);
        case K::And: {
            Ksla acc = compile(f.children().front(), env, depth);
            for (std::size_t i = 1; i < f.children().size(); ++i)
                acc = clean(product_intersect(acc, compile(f.children()[i], env, depth)));
            return acc;
        }
        case K::Or: {
            Ksla acc = compile(f.children().front(), env, depth);
            for (std::size_t i = 1; i < f.children().size(); ++i) acc = unite(acc, compile(f.children()[i], env, depth));
            return clean(determinize(acc, opt_));
        }
        case K::ExistsFirst:
        case K::ExistsSecond: {
            const unsigned track = 2 + depth;
            env[f.first()] = track;
            Ksla body = compile(f.body(), env, depth + 1);
            env.erase(f.first());
            Predicate t = Predicate::track(track);
            Predicate e = Predicate::track(end_track);
            Ksla guard(t_, 2);
            if (f.kind() == K::ExistsFirst) {
                // exactly one marked position, not after the window end
                guard.set_final(1);
                guard.add_edge(0, 0, !t && !e);
                guard.add_edge(0, 1, t);
                guard.add_edge(1, 1, !t);
            } else {
                // every marked position at or before the window end
                guard.set_final(0);
                guard.set_final(1);
                guard.add_edge(0, 0, !e);
                guard.add_edge(0, 1, e);
                guard.add_edge(1, 1, !t);
            }
            guard.mark_deterministic();
            Ksla marked = product_intersect(body, guard);
            return clean(determinize(project_track(marked, track), opt_));
        }
        }
        return empty_language(t_);
    }

private:
    const Theory& t_;
    const DeterminizeOptions& opt_;
};

/// Accepts exactly the words marked with one begin and one end position (begin not after
/// end) and ending at the end position.
inline Ksla window_marker_checker(const Theory& t) {
    Predicate b = Predicate::track(begin_track);
    Predicate e = Predicate::track(end_track);
    Ksla c(t, 3);
    c.set_final(2);
    c.add_edge(0, 0, !b && !e);
    c.add_edge(0, 1, b && !e);
    c.add_edge(0, 2, b && e);
    c.add_edge(1, 1, !b && !e);
    c.add_edge(1, 2, !b && e);
    c.mark_deterministic();
    return c;
}

} // namespace detail

/// The track-extended theory a formula compiles over: begin, end and one track per nesting level.
inline Theory formula_theory(const GuardedFormula& f) {
    return f.theory.with_tracks(2 + static_cast<unsigned>(detail::quantifier_depth(f.root)));
}

struct MarkedAutomaton {
    Ksla automaton;
    /// Phase of each state: 0 before the begin mark, 1 between marks, 2 after the end mark.
    std::vector<int> phase;
};

/// Deterministic automaton over the extended theory accepting w with begin/end marks
/// (tracks 0 and 1) iff the formula holds for that window on the unmarked prefix.
inline MarkedAutomaton compile_formula_marked(const GuardedFormula& f, const DeterminizeOptions& opt = {}) {
    if (!f.theory.can_decide_sat())
        throw CapabilityMissing("formula compilation needs satisfiability, unavailable in " + f.theory.describe());
    Theory ext = formula_theory(f);
    detail::FormulaCompiler compiler(ext, opt);
    std::map<std::string, unsigned> env{{std::string(window_begin), detail::begin_track},
                                        {std::string(window_end), detail::end_track}};
    Ksla body = clean(determinize(compiler.compile(f.root, env, 0), opt));
    std::vector<std::pair<StateId, StateId>> pairs;
    Ksla marked = product_intersect(body, detail::window_marker_checker(ext), &pairs);
    MarkedAutomaton out{std::move(marked), {}};
    for (const auto& [a, c] : pairs) out.phase.push_back(static_cast<int>(c));
    return out;
}

/// Splits the marked automaton at every begin-marked transition into a prefix automaton
/// (runs ending in the source state) and a window automaton (starting with that transition).
inline WindowExpression compile_formula_to_pairs(const GuardedFormula& f, const DeterminizeOptions& opt = {}) {
    MarkedAutomaton m = compile_formula_marked(f, opt);
    const Ksla& s = m.automaton;
    const Theory& ext = s.theory();
    const Theory& base = f.theory;
    const auto dead = dead_mask(s);
    auto strip = [&](const Predicate& g, std::optional<bool> b, std::optional<bool> e) {
        Predicate r = g;
        if (b) r = substitute_track(r, detail::begin_track, *b);
        if (e) r = substitute_track(r, detail::end_track, *e);
        return tidy(ext, r);
    };

    std::map<StateId, Ksla> prefixes;
    auto prefix_for = [&](StateId q) -> const Ksla& {
        auto it = prefixes.find(q);
        if (it != prefixes.end()) return it->second;
        Ksla pa(ext, s.size());
        for (StateId r = 0; r < s.size(); ++r) {
            if (m.phase[r] != 0) continue;
            for (const auto& e : s.out(r))
                if (m.phase[e.to] == 0) pa.add_edge(r, e.to, strip(e.guard, false, false));
        }
        pa.set_initial(s.initial());
        pa.set_final(q);
        return prefixes.emplace(q, prepare(pa.with_theory(base), opt)).first->second;
    };

    WindowExpression expr(base);
    std::set<std::string> seen;
    for (StateId q = 0; q < s.size(); ++q) {
        if (m.phase[q] != 0 || dead[q]) continue;
        for (const auto& tb : s.out(q)) {
            if (m.phase[tb.to] == 0 || dead[tb.to]) continue;
            Ksla wa(ext, s.size() + 1);
            const StateId start = s.size();
            wa.add_edge(start, tb.to, strip(tb.guard, true, std::nullopt));
            for (StateId r = 0; r < s.size(); ++r) {
                if (m.phase[r] == 0) continue;
                wa.set_final(r, s.is_final(r));
                for (const auto& e : s.out(r))
                    if (m.phase[e.to] != 0) wa.add_edge(r, e.to, strip(e.guard, false, std::nullopt));
            }
            wa.set_initial(start);
            Ksla window = prepare(project_track(wa, detail::end_track).with_theory(base), opt);
            if (dead_mask(window)[window.initial()]) continue;
            const Ksla& prefix = prefix_for(q);
            if (dead_mask(prefix)[prefix.initial()]) continue;
            if (!seen.insert(serialize(prefix) + "\n" + serialize(window)).second) continue;
            expr.add(prefix, window);
        }
    }
    return expr;
}

} // namespace winex

#endif // WINEX_SMSO_COMPILE_HPP
