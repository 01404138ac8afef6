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

#ifndef WINEX_EXPAND_HPP
#define WINEX_EXPAND_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "winex/error.hpp"
#include "winex/ksla.hpp"

namespace winex {

/// Letter-labelled automaton obtained by remembering the last k letters in the state.
struct ExpandedAutomaton {
    static constexpr StateId none = std::numeric_limits<StateId>::max();

    std::vector<Letter> letters;
    StateId initial = 0;
    std::vector<bool> final;
    /// successors[state][letter index]
    std::vector<std::vector<std::vector<StateId>>> successors;
    /// Underlying automaton state, or `none` while the first k letters are read.
    std::vector<StateId> base;
    /// Letter indices of the last min(k, read) letters, oldest first.
    std::vector<std::vector<std::size_t>> context;

    std::size_t size() const noexcept { return final.size(); }

    std::optional<std::size_t> letter_index(const Letter& l) const {
        for (std::size_t i = 0; i < letters.size(); ++i)
            if (letters[i] == l) return i;
        return std::nullopt;
    }

    std::optional<StateId> next(StateId q, std::size_t letter) const {
        const auto& s = successors[q][letter];
        if (s.empty()) return std::nullopt;
        return s.front();
    }

    bool accepts(std::span<const Letter> w) const {
        std::vector<StateId> cur{initial};
        for (const Letter& l : w) {
            auto li = letter_index(l);
            if (!li) return false;
            std::vector<StateId> nxt;
            for (StateId q : cur)
                for (StateId r : successors[q][*li]) nxt.push_back(r);
            std::sort(nxt.begin(), nxt.end());
            nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
            cur = std::move(nxt);
        }
        for (StateId q : cur)
            if (final[q]) return true;
        return false;
    }

    /// State (q, ctx) for a base state and a full k-letter context, if reachable.
    std::optional<StateId> find(StateId q, const std::vector<std::size_t>& ctx) const {
        for (StateId s = 0; s < size(); ++s)
            if (base[s] == q && context[s] == ctx) return s;
        return std::nullopt;
    }
};

/// Expands a finite-theory automaton; only states reachable from the initial state are built.
inline ExpandedAutomaton expand_finite(const Ksla& a) {
    const Theory& t = a.theory();
    if (t.kind() != TheoryKind::Finite) throw CapabilityMissing("expansion needs a finite theory");
    const std::size_t k = a.lookback();
    ExpandedAutomaton x;
    x.letters = t.enumerate_letters();
    const std::size_t m = x.letters.size();
    std::map<std::pair<StateId, std::vector<std::size_t>>, StateId> index;
    std::deque<StateId> queue;
    auto intern = [&](StateId base, std::vector<std::size_t> ctx) {
        auto key = std::pair(base, ctx);
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        StateId id = x.size();
        bool main = base != ExpandedAutomaton::none;
        x.final.push_back(main && a.is_final(base));
        x.base.push_back(base);
        x.context.push_back(std::move(ctx));
        x.successors.emplace_back(m);
        index.emplace(std::move(key), id);
        queue.push_back(id);
        return id;
    };
    x.initial = k == 0 ? intern(a.initial(), {}) : intern(ExpandedAutomaton::none, {});
    std::vector<Letter> window(k + 1);
    while (!queue.empty()) {
        StateId s = queue.front();
        queue.pop_front();
        const StateId base = x.base[s];
        const auto ctx = x.context[s];
        for (std::size_t li = 0; li < m; ++li) {
            std::vector<std::size_t> next_ctx = ctx;
            next_ctx.push_back(li);
            if (base == ExpandedAutomaton::none) {
                StateId to = next_ctx.size() == k ? intern(a.initial(), next_ctx) : intern(base, next_ctx);
                x.successors[s][li].push_back(to);
                continue;
            }
            for (std::size_t i = 0; i <= k; ++i) window[i] = x.letters[next_ctx[i]];
            next_ctx.erase(next_ctx.begin());
            for (const auto& e : a.out(base))
                if (eval(e.guard, window)) x.successors[s][li].push_back(intern(e.to, next_ctx));
        }
    }
    return x;
}

} // namespace winex

#endif // WINEX_EXPAND_HPP
