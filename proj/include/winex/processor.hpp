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

#ifndef WINEX_PROCESSOR_HPP
#define WINEX_PROCESSOR_HPP

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "winex/aggregator.hpp"
#include "winex/error.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/window_expression.hpp"

namespace winex {

template <class Result>
struct WindowOutput {
    std::size_t pair = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    Result aggregate{};
};

struct PaneReport {
    std::size_t indices = 0;
    std::size_t panes = 0;
    /// Per pair: (window automaton state, number of tracked start indices).
    std::vector<std::vector<std::pair<StateId, std::size_t>>> per_state;
};

struct ProcessorOptions {
    /// Re-derive the tracked state independently after every step and count disagreements.
    bool debug_invariants = false;
};

/// Online window extraction over a window expression with pane-based aggregation.
template <Aggregator Agg>
class Processor {
public:
    using Element = typename Agg::Element;
    using State = typename Agg::State;
    using Result = typename Agg::Result;
    using Output = WindowOutput<Result>;

    explicit Processor(WindowExpression expr, Agg agg = {}, ProcessorOptions opt = {})
        : Processor(std::make_shared<const WindowExpression>(std::move(expr)), std::move(agg), opt) {}

    Processor(std::shared_ptr<const WindowExpression> expr, Agg agg, ProcessorOptions opt = {})
        : shared_(std::move(expr)), agg_(std::move(agg)), opt_(opt) {
        for (std::size_t p = 0; p < expr_().size(); ++p) {
            const auto& pair = expr_()[p];
            if (!pair.prefix.deterministic() || !pair.window.deterministic())
                throw PreconditionError("pair " + std::to_string(p) + " is not deterministic");
            pairs_.push_back(PairState{pair.prefix.initial(), {}, dead_mask(pair.window)});
            if (opt_.debug_invariants) shadow_.push_back(Shadow{{pair.prefix.initial()}, {}});
        }
        panes_.push_back(Pane{0, std::nullopt, agg_.empty()});
    }

    const WindowExpression& expression() const noexcept { return *shared_; }
    const Agg& aggregator() const noexcept { return agg_; }

    /// Index of the last letter read; -1 before any letter.
    long long position() const noexcept { return static_cast<long long>(next_) - 1; }

    std::vector<Output> step(const Letter& letter) {
        if constexpr (std::is_same_v<Element, Letter>) {
            return step(letter, letter);
        } else {
            return step(letter, letter.is_number() ? Element(letter.as_number()) : Element{});
        }
    }

    /// Consumes the letter at position n with its aggregation payload and returns the
    /// windows ending at n, ordered by (pair, start).
    std::vector<Output> step(const Letter& letter, const Element& element) {
        expr_().theory().validate_letter(letter);
        const std::size_t k = expr_().lookback();
        const std::size_t n = next_++;
        if (n < k) {
            block_.push_back(letter);
            agg_.add(panes_.back().acc, element);
            return {};
        }
        std::vector<Letter> window(block_.begin(), block_.end());
        window.push_back(letter);
        const std::span<const Letter> w(window);

        bool begin = false;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            auto& ps = pairs_[p];
            const Ksla& wa = expr_()[p].window;
            if (ps.prefix && expr_()[p].prefix.is_final(*ps.prefix) && !ps.dead[wa.initial()]) {
                ps.starts[wa.initial()].insert(n);
                ++live_[n];
                begin = true;
            }
        }
        if (begin && panes_.back().start < n) {
            panes_.back().end = n - 1;
            panes_.push_back(Pane{n, std::nullopt, agg_.empty()});
        }
        agg_.add(panes_.back().acc, element);

        std::vector<std::size_t> released;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            auto& ps = pairs_[p];
            const Ksla& wa = expr_()[p].window;
            if (ps.prefix) ps.prefix = winex::step(expr_()[p].prefix, *ps.prefix, w);
            std::map<StateId, std::set<std::size_t>> next;
            for (auto& [q, starts] : ps.starts) {
                auto to = winex::step(wa, q, w);
                if (!to || ps.dead[*to]) {
                    for (std::size_t s : starts) release(s, released);
                    continue;
                }
                auto& dst = next[*to];
                if (dst.empty()) dst.swap(starts);
                else dst.merge(starts);
            }
            ps.starts.swap(next);
        }

        std::vector<Output> out;
        std::vector<std::optional<State>> suffix;
        for (std::size_t p = 0; p < pairs_.size(); ++p)
            for (const auto& [q, starts] : pairs_[p].starts) {
                if (!expr_()[p].window.is_final(q)) continue;
                for (std::size_t s : starts) out.push_back(Output{p, s, n, finalize(combined_from(s, suffix), p)});
            }
        std::sort(out.begin(), out.end(),
                  [](const Output& a, const Output& b) { return std::tie(a.pair, a.start) < std::tie(b.pair, b.start); });

        collect_panes(n, released);
        block_.push_back(letter);
        if (block_.size() > k) block_.pop_front();
        if (opt_.debug_invariants) check_invariants(w, n);
        return out;
    }

    PaneReport pane_report() const {
        PaneReport r;
        r.panes = panes_.size();
        for (const auto& ps : pairs_) {
            auto& row = r.per_state.emplace_back();
            for (const auto& [q, starts] : ps.starts) {
                row.emplace_back(q, starts.size());
                r.indices += starts.size();
            }
        }
        return r;
    }

    std::size_t violations() const noexcept { return violations_; }
    const std::vector<std::string>& violation_messages() const noexcept { return messages_; }

    /// Current prefix-automaton state of a pair; empty once the prefix run has blocked.
    std::optional<StateId> prefix_state(std::size_t pair) const { return pairs_.at(pair).prefix; }
    const std::map<StateId, std::set<std::size_t>>& start_indices(std::size_t pair) const {
        return pairs_.at(pair).starts;
    }

    struct PaneView {
        std::size_t start;
        std::optional<std::size_t> end;
        State acc;
    };
    std::vector<PaneView> panes() const {
        std::vector<PaneView> v;
        for (const auto& p : panes_) v.push_back(PaneView{p.start, p.end, p.acc});
        return v;
    }

private:
    struct PairState {
        std::optional<StateId> prefix;
        std::map<StateId, std::set<std::size_t>> starts;
        std::vector<bool> dead;
    };
    struct Pane {
        std::size_t start;
        std::optional<std::size_t> end;
        State acc;
    };
    struct Shadow {
        std::vector<StateId> prefix;
        std::map<std::size_t, StateId> copies;
    };

    Result finalize(const State& s, std::size_t pair) const {
        if constexpr (requires { agg_.finalize(s, pair); }) return agg_.finalize(s, pair);
        else return agg_.finalize(s);
    }

    void release(std::size_t s, std::vector<std::size_t>& released) {
        auto it = live_.find(s);
        if (it == live_.end()) return;
        if (--it->second == 0) {
            live_.erase(it);
            released.push_back(s);
        }
    }

    std::size_t pane_index(std::size_t start) const {
        auto it = std::lower_bound(panes_.begin(), panes_.end(), start,
                                   [](const Pane& p, std::size_t s) { return p.start < s; });
        if (it == panes_.end() || it->start != start) return panes_.size();
        return static_cast<std::size_t>(it - panes_.begin());
    }

    const State& combined_from(std::size_t start, std::vector<std::optional<State>>& suffix) const {
        if (suffix.empty()) suffix.resize(panes_.size());
        std::size_t i = pane_index(start);
        if (i == panes_.size()) throw PreconditionError("no pane begins at tracked index " + std::to_string(start));
        if (!suffix[i]) {
            std::size_t j = i;
            while (j + 1 < panes_.size() && !suffix[j + 1]) ++j;
            State acc = j + 1 < panes_.size() ? *suffix[j + 1] : agg_.empty();
            for (std::size_t m = j + 1; m-- > i;) {
                acc = agg_.combine(panes_[m].acc, acc);
                suffix[m] = acc;
            }
        }
        return *suffix[i];
    }

    void collect_panes(std::size_t n, const std::vector<std::size_t>& released) {
        if (live_.empty()) {
            panes_.clear();
            panes_.push_back(Pane{n + 1, std::nullopt, agg_.empty()});
            return;
        }
        const std::size_t x_min = live_.begin()->first;
        while (panes_.size() > 1 && panes_.front().start < x_min) panes_.pop_front();
        for (std::size_t s : released) {
            if (s <= x_min) continue;
            std::size_t i = pane_index(s);
            if (i == panes_.size() || i == 0) continue;
            Pane& prev = panes_[i - 1];
            prev.acc = agg_.combine(prev.acc, panes_[i].acc);
            prev.end = panes_[i].end;
            panes_.erase(panes_.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    void violation(std::string msg) {
        ++violations_;
        if (messages_.size() < 32) messages_.push_back("step " + std::to_string(next_ - 1) + ": " + std::move(msg));
    }

    void check_invariants(std::span<const Letter> w, std::size_t n) {
        std::map<std::size_t, std::size_t> expected_live;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            const Ksla& pa = expr_()[p].prefix;
            const Ksla& wa = expr_()[p].window;
            Shadow& sh = shadow_[p];
            const auto& ps = pairs_[p];

            bool opens = std::any_of(sh.prefix.begin(), sh.prefix.end(), [&](StateId q) { return pa.is_final(q); });
            if (opens) sh.copies[n] = wa.initial();
            for (auto it = sh.copies.begin(); it != sh.copies.end();) {
                auto to = winex::step(wa, it->second, w);
                if (!to || dead_mask_of(p)[*to]) {
                    it = sh.copies.erase(it);
                } else {
                    it->second = *to;
                    ++it;
                }
            }
            sh.prefix = step_set(pa, sh.prefix, w);

            std::vector<StateId> tracked;
            if (ps.prefix) tracked.push_back(*ps.prefix);
            if (tracked != sh.prefix) violation("pair " + std::to_string(p) + ": prefix state differs from a direct run");

            std::map<std::size_t, StateId> merged;
            for (const auto& [q, starts] : ps.starts) {
                if (starts.empty()) violation("pair " + std::to_string(p) + ": empty index set kept for state " + std::to_string(q));
                if (ps.dead[q]) violation("pair " + std::to_string(p) + ": dead state " + std::to_string(q) + " tracks indices");
                for (std::size_t s : starts) {
                    if (!merged.emplace(s, q).second)
                        violation("pair " + std::to_string(p) + ": index " + std::to_string(s) + " tracked twice");
                    ++expected_live[s];
                }
            }
            if (merged != sh.copies)
                violation("pair " + std::to_string(p) + ": tracked start indices differ from per-index runs");
        }
        if (std::map<std::size_t, std::size_t>(live_.begin(), live_.end()) != expected_live)
            violation("live index counts out of sync");

        if (panes_.empty() || panes_.back().end) violation("no open pane");
        for (std::size_t i = 0; i + 1 < panes_.size(); ++i) {
            if (!panes_[i].end || *panes_[i].end + 1 != panes_[i + 1].start) violation("panes are not contiguous");
            if (panes_[i + 1].start <= panes_[i].start) violation("panes out of order");
        }
        for (std::size_t i = 1; i < panes_.size(); ++i)
            if (!live_.count(panes_[i].start)) violation("pane boundary " + std::to_string(panes_[i].start) + " is not a live window start");
        for (const auto& [s, c] : live_)
            if (pane_index(s) == panes_.size()) violation("live index " + std::to_string(s) + " has no pane");
    }

    const std::vector<bool>& dead_mask_of(std::size_t p) const { return pairs_[p].dead; }

    const WindowExpression& expr_() const noexcept { return *shared_; }

    std::shared_ptr<const WindowExpression> shared_;
    Agg agg_;
    ProcessorOptions opt_;
    std::vector<PairState> pairs_;
    std::vector<Shadow> shadow_;
    std::deque<Pane> panes_;
    std::deque<Letter> block_;
    std::map<std::size_t, std::size_t> live_;
    std::size_t next_ = 0;
    std::size_t violations_ = 0;
    std::vector<std::string> messages_;
};

/// Builds a processor and feeds it the first k letters.
template <Aggregator Agg>
Processor<Agg> init_processor(const WindowExpression& expr, Agg agg, std::span<const Letter> first_block,
                              ProcessorOptions opt = {}) {
    if (first_block.size() != expr.lookback())
        throw PreconditionError("the first block must hold exactly k letters");
    Processor<Agg> p(expr, std::move(agg), opt);
    for (const auto& l : first_block) p.step(l);
    return p;
}

template <Aggregator Agg>
std::vector<WindowOutput<typename Agg::Result>> run_stream(const WindowExpression& expr, Agg agg,
                                                           std::span<const Letter> stream, ProcessorOptions opt = {}) {
    Processor<Agg> p(expr, std::move(agg), opt);
    std::vector<WindowOutput<typename Agg::Result>> out;
    for (const auto& l : stream) {
        auto o = p.step(l);
        out.insert(out.end(), std::make_move_iterator(o.begin()), std::make_move_iterator(o.end()));
    }
    return out;
}

} // namespace winex

#endif // WINEX_PROCESSOR_HPP
