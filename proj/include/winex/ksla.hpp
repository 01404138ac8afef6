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

#ifndef WINEX_KSLA_HPP
#define WINEX_KSLA_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "winex/error.hpp"
#include "winex/letter.hpp"
#include "winex/predicate.hpp"
#include "winex/theory.hpp"

namespace winex {

using StateId = std::size_t;

struct Edge {
    StateId to;
    Predicate guard;
};

/// A k-lookback symbolic automaton. Guards are stored sparsely: at most one edge per
/// (source, target) pair, absent edges meaning false.
class Ksla {
public:
    explicit Ksla(Theory theory, std::size_t states = 0) : theory_(std::move(theory)) {
        for (std::size_t i = 0; i < states; ++i) add_state();
    }

    const Theory& theory() const noexcept { return theory_; }
    std::size_t lookback() const noexcept { return theory_.lookback(); }
    std::size_t size() const noexcept { return out_.size(); }

    StateId add_state(bool final = false) {
        out_.emplace_back();
        final_.push_back(final);
        names_.emplace_back();
        return out_.size() - 1;
    }

    StateId initial() const noexcept { return initial_; }
    void set_initial(StateId q) {
        check(q);
        initial_ = q;
    }

    bool is_final(StateId q) const { return final_.at(q); }
    void set_final(StateId q, bool f = true) { final_.at(q) = f; }
    std::vector<StateId> finals() const {
        std::vector<StateId> out;
        for (StateId q = 0; q < size(); ++q)
            if (final_[q]) out.push_back(q);
        return out;
    }

    const std::string& name(StateId q) const { return names_.at(q); }
    void set_name(StateId q, std::string n) { names_.at(q) = std::move(n); }

    /// Adds a transition, disjoining with an existing guard on the same pair.
    void add_edge(StateId from, StateId to, const Predicate& guard) {
        check(from);
        check(to);
        if (guard.is_false()) return;
        theory_.validate(guard);
        for (auto& e : out_[from])
            if (e.to == to) {
                e.guard = make_or({e.guard, guard});
                return;
            }
        out_[from].push_back(Edge{to, guard});
    }

    /// Replaces the guard on (from, to); false removes the edge.
    void set_edge(StateId from, StateId to, const Predicate& guard) {
        check(from);
        check(to);
        auto& edges = out_[from];
        auto it = std::find_if(edges.begin(), edges.end(), [&](const Edge& e) { return e.to == to; });
        if (guard.is_false()) {
            if (it != edges.end()) edges.erase(it);
            return;
        }
        theory_.validate(guard);
        if (it != edges.end()) it->guard = guard;
        else edges.push_back(Edge{to, guard});
    }

    const std::vector<Edge>& out(StateId q) const { return out_.at(q); }

    Predicate guard(StateId from, StateId to) const {
        for (const auto& e : out_.at(from))
            if (e.to == to) return e.guard;
        return Predicate::bottom();
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& o : out_) n += o.size();
        return n;
    }

    /// Set by constructions that certify determinism (pairwise disjoint out-guards).
    bool deterministic() const noexcept { return deterministic_; }
    void mark_deterministic(bool d = true) noexcept { deterministic_ = d; }

    /// Same automaton over another theory with the same lookback (e.g. after tracks are erased).
    Ksla with_theory(Theory t) const {
        if (t.lookback() != lookback()) throw TheoryMismatch("lookback differs");
        Ksla copy = *this;
        copy.theory_ = std::move(t);
        for (const auto& edges : copy.out_)
            for (const auto& e : edges) copy.theory_.validate(e.guard);
        return copy;
    }

private:
    void check(StateId q) const {
        if (q >= size()) throw PreconditionError("state " + std::to_string(q) + " does not exist");
    }

    Theory theory_;
    std::vector<std::vector<Edge>> out_;
    std::vector<bool> final_;
    std::vector<std::string> names_;
    StateId initial_ = 0;
    bool deterministic_ = false;
};

struct RunTrace {
    std::vector<StateId> states;
    bool accepted = false;
};

struct RunResult {
    bool accepted = false;
    std::optional<RunTrace> trace;
};

/// All targets reachable from any state of `from` on the window x_{-k}..x_0.
inline std::vector<StateId> step_set(const Ksla& a, const std::vector<StateId>& from, std::span<const Letter> window) {
    std::vector<StateId> next;
    for (StateId q : from)
        for (const auto& e : a.out(q))
            if (eval(e.guard, window)) next.push_back(e.to);
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    return next;
}

/// First enabled transition from q; unique when the automaton is deterministic.
inline std::optional<StateId> step(const Ksla& a, StateId q, std::span<const Letter> window) {
    for (const auto& e : a.out(q))
        if (eval(e.guard, window)) return e.to;
    return std::nullopt;
}

/// Runs a deterministic automaton from `state`, whose last k letters read were `context`,
/// over `word`. Returns nullopt when the run blocks.
inline std::optional<StateId> run_from(const Ksla& a, StateId state, std::span<const Letter> context,
                                       std::span<const Letter> word) {
    const std::size_t k = a.lookback();
    if (context.size() != k) throw PreconditionError("context must hold exactly k letters");
    std::vector<Letter> buf(context.begin(), context.end());
    buf.insert(buf.end(), word.begin(), word.end());
    std::optional<StateId> q = state;
    for (std::size_t i = k; i < buf.size() && q; ++i)
        q = step(a, *q, std::span<const Letter>(buf).subspan(i - k, k + 1));
    return q;
}

/// Acceptance with the lookback conventions: words shorter than k are rejected and a
/// word of length exactly k is accepted iff the initial state is final. Nondeterministic
/// automata are decided by subset simulation; a trace is reported for deterministic ones.
inline RunResult run_accepts(const Ksla& a, std::span<const Letter> w) {
    for (const auto& l : w) a.theory().validate_letter(l);
    const std::size_t k = a.lookback();
    if (w.size() < k) return {};
    if (a.deterministic()) {
        RunTrace trace;
        StateId q = a.initial();
        trace.states.push_back(q);
        bool blocked = false;
        for (std::size_t i = k; i < w.size(); ++i) {
            auto next = step(a, q, w.subspan(i - k, k + 1));
            if (!next) {
                blocked = true;
                break;
            }
            q = *next;
            trace.states.push_back(q);
        }
        trace.accepted = !blocked && a.is_final(q);
        return {trace.accepted, trace};
    }
    std::vector<StateId> current{a.initial()};
    for (std::size_t i = k; i < w.size() && !current.empty(); ++i) current = step_set(a, current, w.subspan(i - k, k + 1));
    bool acc = std::any_of(current.begin(), current.end(), [&](StateId q) { return a.is_final(q); });
    return {acc, std::nullopt};
}

inline bool accepts(const Ksla& a, std::span<const Letter> w) { return run_accepts(a, w).accepted; }

} // namespace winex

#endif // WINEX_KSLA_HPP
