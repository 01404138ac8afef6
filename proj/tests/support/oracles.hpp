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

// Brute-force reference implementations used only by the tests. They follow the
// definitions directly and share no code with the constructions they check beyond
// single-window predicate evaluation.

#ifndef WINEX_TESTS_ORACLES_HPP
#define WINEX_TESTS_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <tuple>
#include <vector>

#include "winex/ksla.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/letter.hpp"
#include "winex/predicate.hpp"
#include "winex/window_expression.hpp"

namespace oracle {

using winex::Ksla;
using winex::Letter;
using winex::StateId;
using winex::WindowExpression;
using winex::Word;
using winex::eval;
using winex::step;

/// Path search over the transition graph: is some run from `from` over w[i..] accepting?
inline bool brute_accepts_from(const Ksla& a, StateId from, std::span<const Letter> w, std::size_t i,
                         std::set<std::pair<StateId, std::size_t>>& failed) {
    const std::size_t k = a.lookback();
    if (i == w.size()) return a.is_final(from);
    if (failed.count({from, i})) return false;
    for (const auto& e : a.out(from))
        if (eval(e.guard, w.subspan(i - k, k + 1)) && brute_accepts_from(a, e.to, w, i + 1, failed)) return true;
    failed.insert({from, i});
    return false;
}

inline bool brute_accepts(const Ksla& a, std::span<const Letter> w) {
    const std::size_t k = a.lookback();
    if (w.size() < k) return false;
    std::set<std::pair<StateId, std::size_t>> failed;
    return brute_accepts_from(a, a.initial(), w, k, failed);
}

/// k-concatenation by definition: some split point m with the first m letters in L(a)
/// and the remainder, preceded by the k letters before it, in L(b).
inline bool concat_accepts(const Ksla& a, const Ksla& b, std::span<const Letter> w) {
    const std::size_t k = a.lookback();
    for (std::size_t m = k; m <= w.size(); ++m)
        if (brute_accepts(a, w.subspan(0, m)) && brute_accepts(b, w.subspan(m - k))) return true;
    return false;
}

using WindowSet = std::set<std::tuple<std::size_t, std::size_t, std::size_t>>;

/// (pair, i_b, i_e): the prefix automaton accepts w[0..i_b-1] and the window automaton
/// accepts w[i_b-k..i_e].
inline WindowSet windows(const WindowExpression& e, std::span<const Letter> w) {
    WindowSet out;
    const std::size_t k = e.lookback();
    for (std::size_t p = 0; p < e.size(); ++p)
        for (std::size_t b = k; b < w.size(); ++b) {
            if (!brute_accepts(e[p].prefix, w.subspan(0, b))) continue;
            for (std::size_t en = b; en < w.size(); ++en)
                if (brute_accepts(e[p].window, w.subspan(b - k, en - b + 1 + k))) out.insert({p, b, en});
        }
    return out;
}

/// Calls f on every word over `letters` with length in [lo, hi].
inline void for_each_word(const std::vector<Letter>& letters, std::size_t lo, std::size_t hi,
                          const std::function<void(const Word&)>& f) {
    Word w;
    std::function<void()> rec = [&] {
        if (w.size() >= lo) f(w);
        if (w.size() == hi) return;
        for (const auto& l : letters) {
            w.push_back(l);
            rec();
            w.pop_back();
        }
    };
    rec();
}

inline Word random_numbers(std::mt19937& rng, std::size_t n, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    Word w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(Letter(static_cast<long long>(d(rng))));
    return w;
}

inline Word random_symbols(std::mt19937& rng, std::size_t n, const std::vector<std::string>& alphabet) {
    std::uniform_int_distribution<std::size_t> d(0, alphabet.size() - 1);
    Word w;
    for (std::size_t i = 0; i < n; ++i) w.push_back(Letter(alphabet[d(rng)]));
    return w;
}

/// Number of start indices still able to complete a window after reading all of w:
/// i is counted when w[0..i-1] is a prefix match and some extension of w[i-k..] can
/// still be accepted by the window automaton, judged by reachability of a final state.
inline std::size_t live_starts(const WindowExpression& e, std::span<const Letter> w) {
    std::size_t n = 0;
    const std::size_t k = e.lookback();
    for (std::size_t p = 0; p < e.size(); ++p) {
        const Ksla& wa = e[p].window;
        std::vector<bool> can_finish(wa.size(), false);
        for (StateId q = 0; q < wa.size(); ++q) can_finish[q] = wa.is_final(q);
        for (bool changed = true; changed;) {
            changed = false;
            for (StateId q = 0; q < wa.size(); ++q)
                if (!can_finish[q])
                    for (const auto& edge : wa.out(q))
                        if (can_finish[edge.to] && wa.theory().satisfiable(edge.guard)) {
                            can_finish[q] = true;
                            changed = true;
                        }
        }
        for (std::size_t b = k; b < w.size(); ++b) {
            if (!brute_accepts(e[p].prefix, w.subspan(0, b))) continue;
            std::optional<StateId> q = wa.initial();
            for (std::size_t i = b; i < w.size() && q; ++i) q = step(wa, *q, w.subspan(i - k, k + 1));
            if (q && can_finish[*q]) ++n;
        }
    }
    return n;
}

} // namespace oracle

#endif // WINEX_TESTS_ORACLES_HPP
