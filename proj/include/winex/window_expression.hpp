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

#ifndef WINEX_WINDOW_EXPRESSION_HPP
#define WINEX_WINDOW_EXPRESSION_HPP

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "winex/error.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_json.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/sre.hpp"

namespace winex {

struct WindowPair {
    Ksla prefix;
    Ksla window;
};

/// A set of (prefix automaton, window automaton) pairs over one theory.
/// (i_b, i_e) is a window of pair p when w[0:i_b-1] is accepted by the prefix automaton
/// and w[i_b-k:i_e] by the window automaton.
class WindowExpression {
public:
    explicit WindowExpression(Theory theory) : theory_(std::move(theory)) {}

    const Theory& theory() const noexcept { return theory_; }
    std::size_t lookback() const noexcept { return theory_.lookback(); }
    const std::vector<WindowPair>& pairs() const noexcept { return pairs_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    const WindowPair& operator[](std::size_t i) const { return pairs_.at(i); }

    void add(Ksla prefix, Ksla window) {
        if (!(prefix.theory() == theory_) || !(window.theory() == theory_))
            throw TheoryMismatch("pair automata must use the expression's theory " + theory_.describe());
        pairs_.push_back(WindowPair{std::move(prefix), std::move(window)});
    }

private:
    Theory theory_;
    std::vector<WindowPair> pairs_;
};

/// Determinizes and cleans an automaton for use in a window expression.
inline Ksla prepare(const Ksla& a, const DeterminizeOptions& opt = {}) {
    if (a.deterministic() && !a.theory().can_decide_sat()) return trim(a);
    Ksla d = determinize(a, opt);
    return a.theory().can_decide_sat() ? clean(d) : trim(d);
}

/// Compiles SRE texts (prefix, window) into a deterministic pair.
inline WindowPair compile_sre_pair(std::string_view prefix, std::string_view window, const Theory& t,
                                   const DeterminizeOptions& opt = {}) {
    return WindowPair{prepare(compile_sre(parse_sre(prefix, t)), opt), prepare(compile_sre(parse_sre(window, t)), opt)};
}

using WindowSet = std::set<std::tuple<std::size_t, std::size_t, std::size_t>>;

/// Brute-force enumeration of every (pair, i_b, i_e) with k <= i_b <= i_e < |w|.
inline WindowSet windows_oracle(const WindowExpression& expr, std::span<const Letter> w) {
    WindowSet out;
    const std::size_t k = expr.lookback();
    for (std::size_t p = 0; p < expr.size(); ++p)
        for (std::size_t ib = k; ib < w.size(); ++ib) {
            if (!accepts(expr[p].prefix, w.first(ib))) continue;
            for (std::size_t ie = ib; ie < w.size(); ++ie)
                if (accepts(expr[p].window, w.subspan(ib - k, ie - ib + k + 1))) out.emplace(p, ib, ie);
        }
    return out;
}

inline Json to_json(const WindowExpression& e) {
    Json pairs = Json::array();
    for (const auto& p : e.pairs()) pairs.push_back(Json{{"prefix", to_json(p.prefix)}, {"window", to_json(p.window)}});
    return pairs;
}

inline WindowExpression expression_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw PreconditionError("window expression must be a nonempty list of pairs");
    std::vector<WindowPair> pairs;
    for (const auto& p : j) pairs.push_back(WindowPair{ksla_from_json(p.at("prefix")), ksla_from_json(p.at("window"))});
    WindowExpression e(pairs.front().prefix.theory());
    for (auto& p : pairs) e.add(std::move(p.prefix), std::move(p.window));
    return e;
}

} // namespace winex

#endif // WINEX_WINDOW_EXPRESSION_HPP
