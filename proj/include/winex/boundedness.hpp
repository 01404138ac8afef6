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

#ifndef WINEX_BOUNDEDNESS_HPP
#define WINEX_BOUNDEDNESS_HPP

#include <algorithm>
#include <array>
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
#include "winex/expand.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/predicate_text.hpp"
#include "winex/processor.hpp"
#include "winex/sre.hpp"
#include "winex/window_expression.hpp"

namespace winex {

/// Deterministic automaton describing which streams may occur. A stream conforms while
/// every prefix of length at least k is accepted; the rejecting states must be absorbing.
struct InputSpecifier {
    Ksla automaton;
};

namespace detail {
inline std::string state_label(const Ksla& a, StateId q) {
    return a.name(q).empty() ? "q" + std::to_string(q) : a.name(q);
}
} // namespace detail

/// Throws SpecifierError when a satisfiable transition leads from a rejecting to an accepting state.
inline void validate_input_specifier(const Ksla& a) {
    const Theory& t = a.theory();
    for (StateId q = 0; q < a.size(); ++q) {
        if (a.is_final(q)) continue;
        for (const auto& e : a.out(q)) {
            if (!a.is_final(e.to)) continue;
            if (t.can_decide_sat() && !t.satisfiable(e.guard)) continue;
            throw SpecifierError("rejecting state " + detail::state_label(a, q) + " reaches accepting state " +
                                 detail::state_label(a, e.to) +
                                 " on [" + to_text(e.guard) + "]");
        }
    }
}

inline InputSpecifier make_input_specifier(const Ksla& a, const DeterminizeOptions& opt = {}) {
    Ksla d = a.deterministic() ? a : determinize(a, opt);
    validate_input_specifier(d);
    return InputSpecifier{std::move(d)};
}

inline InputSpecifier universal_specifier(const Theory& t) { return InputSpecifier{universal(t)}; }

/// Streams that never contain a factor matching `r`.
inline InputSpecifier avoid_specifier(const Sre& r, const DeterminizeOptions& opt = {}) {
    const Theory& t = r.theory();
    Sre any = Sre::star(Sre::pred(t, Predicate::top()));
    Ksla contains = compile_sre(Sre::concat(Sre::concat(any, r), any));
    return make_input_specifier(complement(contains, opt), opt);
}

/// True when every prefix of `w` of length at least k is accepted.
inline bool conforms(const InputSpecifier& s, std::span<const Letter> w) {
    const Ksla& a = s.automaton;
    const std::size_t k = a.lookback();
    if (w.size() < k) return true;
    StateId q = a.initial();
    if (!a.is_final(q)) return false;
    for (std::size_t i = k; i < w.size(); ++i) {
        auto n = step(a, q, w.subspan(i - k, k + 1));
        if (!n || !a.is_final(*n)) return false;
        q = *n;
    }
    return true;
}

struct Witness {
    Word w1, w2, w3;
    /// Window automaton state that keeps accumulating start indices.
    StateId state = 0;
};

struct Bounds {
    std::size_t indices = 0;
    std::size_t panes = 0;
};

struct BoundednessVerdict {
    enum class Kind { Bounded, Unbounded, Unknown };
    Kind kind = Kind::Unknown;
    std::optional<Bounds> bounds;
    std::optional<Witness> witness;
    std::string reason;
};

inline const char* to_string(BoundednessVerdict::Kind k) {
    switch (k) {
    case BoundednessVerdict::Kind::Bounded: return "bounded";
    case BoundednessVerdict::Kind::Unbounded: return "unbounded";
    default: return "unknown";
    }
}

namespace detail {

/// States visited by a deterministic run, starting state included; nullopt if it blocks.
inline std::optional<std::vector<StateId>> trace_from(const Ksla& a, StateId q, std::span<const Letter> context,
                                                      std::span<const Letter> word) {
    const std::size_t k = a.lookback();
    std::vector<Letter> buf(context.begin(), context.end());
    buf.insert(buf.end(), word.begin(), word.end());
    std::vector<StateId> states{q};
    for (std::size_t i = k; i < buf.size(); ++i) {
        auto n = step(a, states.back(), std::span<const Letter>(buf).subspan(i - k, k + 1));
        if (!n) return std::nullopt;
        states.push_back(*n);
    }
    return states;
}

inline Word last_k(std::span<const Letter> w, std::size_t k) { return Word(w.end() - static_cast<long>(k), w.end()); }

inline bool same_opening(const std::vector<StateId>& a, const std::vector<StateId>& b, std::size_t m) {
    return std::equal(a.begin(), a.begin() + static_cast<long>(m + 1), b.begin());
}

} // namespace detail

/// Checks the pumping conditions for a candidate witness directly on the automata.
inline bool verify_witness(const Ksla& prefix, const Ksla& window, const InputSpecifier& spec, const Witness& wt) {
    using detail::trace_from;
    const Ksla& s_aut = spec.automaton;
    const std::size_t k = window.lookback();
    if (wt.w1.size() < k || wt.w2.empty() || wt.w3.empty()) return false;
    if (wt.state >= window.size() || dead_mask(window)[wt.state]) return false;
    Word w12 = wt.w1;
    w12.insert(w12.end(), wt.w2.begin(), wt.w2.end());
    const Word ctx1 = detail::last_k(wt.w1, k), ctx2 = detail::last_k(w12, k);
    const std::span<const Letter> head(wt.w1.data(), k), rest(wt.w1.data() + k, wt.w1.size() - k);
    const std::size_t m = std::min({k, wt.w2.size(), wt.w3.size()});

    auto loops = [&](const Ksla& a, bool need_final_path) -> std::optional<StateId> {
        auto t1 = trace_from(a, a.initial(), head, rest);
        if (!t1) return std::nullopt;
        StateId s = t1->back();
        auto t2 = trace_from(a, s, ctx1, wt.w2);
        auto t3 = trace_from(a, s, ctx2, wt.w3);
        if (!t2 || !t3 || t2->back() != s || t3->back() != s) return std::nullopt;
        if (!detail::same_opening(*t2, *t3, m)) return std::nullopt;
        if (need_final_path)
            for (const auto* t : {&*t1, &*t2, &*t3})
                for (StateId q : *t)
                    if (!a.is_final(q)) return std::nullopt;
        return s;
    };
    if (!loops(s_aut, true)) return false;
    auto p = loops(prefix, false);
    if (!p || !prefix.is_final(*p)) return false;

    auto entry = run_from(window, window.initial(), ctx1, wt.w2);
    if (!entry || *entry != wt.state) return false;
    auto t2 = trace_from(window, wt.state, ctx1, wt.w2);
    auto t3 = trace_from(window, wt.state, ctx2, wt.w3);
    if (!t2 || !t3 || t2->back() != wt.state || t3->back() != wt.state) return false;
    return detail::same_opening(*t2, *t3, m);
}

struct BoundednessOptions {
    /// Cap on configurations explored when computing the exact index bound.
    std::size_t config_limit = 200000;
    /// Maximum segment length in the symbolic witness search; 0 disables it.
    std::size_t search_depth = 4;
    std::size_t search_nodes = 400000;
};

namespace detail {

constexpr StateId blocked = ExpandedAutomaton::none - 1;

struct FiniteProblem {
    const Ksla& prefix;
    const Ksla& window;
    const Ksla& spec;
    ExpandedAutomaton S, P, W;
    std::vector<bool> window_dead;
    std::size_t k;

    FiniteProblem(const Ksla& pa, const Ksla& wa, const Ksla& s)
        : prefix(pa), window(wa), spec(s), S(expand_finite(s)), P(expand_finite(pa)), W(expand_finite(wa)),
          window_dead(dead_mask(wa)), k(wa.lookback()) {}

    bool main(const ExpandedAutomaton& x, StateId q) const { return x.base[q] != ExpandedAutomaton::none; }

    /// Specifier successor that keeps the stream conforming.
    std::optional<StateId> spec_next(StateId s, std::size_t li) const {
        auto n = S.next(s, li);
        if (!n) return std::nullopt;
        if (main(S, *n) ? !S.final[*n] : !spec.is_final(spec.initial())) return std::nullopt;
        return n;
    }
    StateId pa_next(StateId p, std::size_t li) const {
        if (p == blocked) return blocked;
        auto n = P.next(p, li);
        return n ? *n : blocked;
    }
    /// Window automaton step from base state q given the specifier state's context.
    std::optional<StateId> wa_step(StateId q, StateId s, std::size_t li) const {
        std::vector<Letter> win;
        for (std::size_t c : S.context[s]) win.push_back(S.letters[c]);
        win.push_back(S.letters[li]);
        auto n = step(window, q, win);
        if (!n || window_dead[*n]) return std::nullopt;
        return n;
    }
    Word letters_of(const std::vector<std::size_t>& path) const {
        Word w;
        for (std::size_t li : path) w.push_back(S.letters[li]);
        return w;
    }
};

inline std::optional<Witness> find_finite_witness(const FiniteProblem& fp) {
    const auto& S = fp.S;
    const auto& P = fp.P;
    const auto& W = fp.W;
    const std::size_t m = S.letters.size();
    if (fp.k > 0 ? !fp.spec.is_final(fp.spec.initial()) : !S.final[S.initial]) return std::nullopt;

    using Pair = std::pair<StateId, StateId>;
    std::map<Pair, std::pair<Pair, std::size_t>> parent;
    std::deque<Pair> queue;
    Pair start{S.initial, P.initial};
    parent.emplace(start, std::pair(start, m));
    queue.push_back(start);
    std::vector<Pair> order;
    while (!queue.empty()) {
        Pair cur = queue.front();
        queue.pop_front();
        order.push_back(cur);
        for (std::size_t li = 0; li < m; ++li) {
            auto sn = fp.spec_next(cur.first, li);
            StateId pn = fp.pa_next(cur.second, li);
            if (!sn || pn == blocked) continue;
            Pair nxt{*sn, pn};
            if (parent.emplace(nxt, std::pair(cur, li)).second) queue.push_back(nxt);
        }
    }
    auto path_to = [&](Pair target) {
        std::vector<std::size_t> path;
        while (target != start) {
            auto [prev, li] = parent.at(target);
            path.push_back(li);
            target = prev;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    for (const Pair& sp : order) {
        auto [s, p] = sp;
        if (!fp.main(S, s) || !S.final[s] || !P.final[p]) continue;
        const auto& ctx = S.context[s];
        auto entry = W.find(fp.window.initial(), ctx);
        if (!entry) continue;
        for (StateId q = 0; q < fp.window.size(); ++q) {
            if (fp.window_dead[q]) continue;
            auto qs = W.find(q, ctx);
            if (!qs) continue;
            using Quad = std::tuple<StateId, StateId, StateId, StateId>;
            const Quad goal{s, p, *qs, *qs};
            std::map<Quad, std::pair<Quad, std::size_t>> seen;
            std::deque<Quad> bfs;
            const Quad origin{s, p, *entry, *qs};
            auto expand = [&](const Quad& from) -> bool {
                auto [a, b, c, d] = from;
                for (std::size_t li = 0; li < m; ++li) {
                    auto an = fp.spec_next(a, li);
                    StateId bn = fp.pa_next(b, li);
                    auto cn = W.next(c, li);
                    auto dn = W.next(d, li);
                    if (!an || bn == blocked || !cn || !dn) continue;
                    Quad nxt{*an, bn, *cn, *dn};
                    if (!seen.emplace(nxt, std::pair(from, li)).second) continue;
                    if (nxt == goal) return true;
                    bfs.push_back(nxt);
                }
                return false;
            };
            bool found = expand(origin);
            while (!found && !bfs.empty()) {
                Quad cur = bfs.front();
                bfs.pop_front();
                found = expand(cur);
            }
            if (!found) continue;
            std::vector<std::size_t> loop;
            Quad cur = goal;
            do {
                auto [prev, li] = seen.at(cur);
                loop.push_back(li);
                cur = prev;
            } while (cur != origin);
            std::reverse(loop.begin(), loop.end());
            Witness wt{fp.letters_of(path_to(sp)), fp.letters_of(loop), fp.letters_of(loop), q};
            return wt;
        }
    }
    return std::nullopt;
}

/// Largest number of live start indices over all conforming streams, or nullopt past the limit.
inline std::optional<std::size_t> exact_index_bound(const FiniteProblem& fp, std::size_t limit) {
    const auto& S = fp.S;
    const std::size_t m = S.letters.size();
    if (fp.k > 0 ? !fp.spec.is_final(fp.spec.initial()) : !S.final[S.initial]) return 0;
    using Counts = std::vector<std::pair<StateId, std::size_t>>;
    using Config = std::tuple<StateId, StateId, Counts>;
    std::set<Config> seen;
    std::deque<Config> queue;
    Config start{S.initial, fp.P.initial, {}};
    seen.insert(start);
    queue.push_back(start);
    std::size_t best = 0;
    const bool entry_live = !fp.window_dead[fp.window.initial()];
    while (!queue.empty()) {
        auto [s, p, counts] = queue.front();
        queue.pop_front();
        for (std::size_t li = 0; li < m; ++li) {
            auto sn = fp.spec_next(s, li);
            if (!sn) continue;
            std::map<StateId, std::size_t> next;
            if (fp.main(S, s)) {
                Counts cur = counts;
                if (p != blocked && fp.P.final[p] && entry_live) cur.emplace_back(fp.window.initial(), 1);
                for (auto [q, c] : cur)
                    if (auto qn = fp.wa_step(q, s, li)) next[*qn] += c;
            }
            Counts nc(next.begin(), next.end());
            std::size_t total = 0;
            for (auto& [q, c] : nc) total += c;
            best = std::max(best, total);
            Config cfg{*sn, fp.pa_next(p, li), std::move(nc)};
            if (seen.insert(cfg).second) {
                if (seen.size() > limit) return std::nullopt;
                queue.push_back(std::move(cfg));
            }
        }
    }
    return best;
}

} // namespace detail

/// Decides bounded memory for a single pair over a finite theory and, when bounded,
/// computes the exact maximum of live start indices and a pane bound.
inline BoundednessVerdict check_bounded_finite(const Ksla& prefix, const Ksla& window, const InputSpecifier& spec,
                                               const BoundednessOptions& opt = {}) {
    require_same_theory(prefix, window);
    require_same_theory(prefix, spec.automaton);
    if (!prefix.deterministic() || !window.deterministic() || !spec.automaton.deterministic())
        throw PreconditionError("boundedness analysis needs deterministic automata");
    validate_input_specifier(spec.automaton);
    detail::FiniteProblem fp(prefix, window, spec.automaton);
    BoundednessVerdict v;
    if (auto wt = detail::find_finite_witness(fp)) {
        if (!verify_witness(prefix, window, spec, *wt))
            throw PreconditionError("internal error: boundedness witness failed verification");
        v.kind = BoundednessVerdict::Kind::Unbounded;
        v.witness = std::move(wt);
        v.reason = "a conforming stream pumps start indices into window state " + detail::state_label(window, v.witness->state);
        return v;
    }
    v.kind = BoundednessVerdict::Kind::Bounded;
    if (auto n1 = detail::exact_index_bound(fp, opt.config_limit)) {
        v.bounds = Bounds{*n1, 2 * *n1 + 1};
        v.reason = "no pumping witness exists";
    } else {
        v.reason = "no pumping witness exists; computing the exact bound exceeded the configuration limit";
    }
    return v;
}

namespace detail {

inline std::vector<Rational> constants_of(const std::vector<const Ksla*>& automata) {
    std::set<Rational> out;
    for (const Ksla* a : automata)
        for (StateId q = 0; q < a->size(); ++q)
            for (const auto& e : a->out(q))
                for_each_atom(e.guard, [&](const Atom& atom) {
                    if (const auto* c = std::get_if<CompareAtom>(&atom)) {
                        for (const Operand* o : {&c->lhs, &c->rhs})
                            if (const auto* r = std::get_if<Rational>(o)) out.insert(*r);
                    }
                });
    return {out.begin(), out.end()};
}

/// One representative per order type relative to the given values.
inline std::vector<Rational> order_slots(std::vector<Rational> vals) {
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) return {Rational(0)};
    std::vector<Rational> out{Rational(vals.front() - 1)};
    for (std::size_t i = 0; i < vals.size(); ++i) {
        out.push_back(vals[i]);
        out.push_back(i + 1 < vals.size() ? Rational((vals[i] + vals[i + 1]) / 2) : Rational(vals[i] + 1));
    }
    return out;
}

class DenseSearch {
public:
    DenseSearch(const Ksla& pa, const Ksla& wa, const InputSpecifier& s, std::size_t nodes)
        : pa_(pa), wa_(wa), spec_(s), k_(wa.lookback()), budget_(nodes),
          constants_(constants_of({&pa, &wa, &s.automaton})) {}

    std::optional<Witness> run(std::size_t depth) {
        for (std::size_t total = 2; total <= 3 * depth; ++total)
            for (std::size_t l2 = 1; l2 <= depth; ++l2)
                for (std::size_t l3 = 1; l3 <= depth; ++l3) {
                    if (l2 + l3 > total || total - l2 - l3 > depth) continue;
                    lens_ = {k_ + total - l2 - l3, l2, l3};
                    word_.clear();
                    if (grow()) return found_;
                    if (exhausted_) return std::nullopt;
                }
        return std::nullopt;
    }
    bool exhausted() const noexcept { return exhausted_; }

private:
    bool grow() {
        if (++nodes_ > budget_) exhausted_ = true;
        if (exhausted_) return false;
        const std::size_t n = word_.size();
        const std::size_t end = lens_[0] + lens_[1] + lens_[2];
        if (n == lens_[0] && !after_prefix()) return false;
        if (n == lens_[0] + lens_[1] && !after_loop()) return false;
        if (n == end) return finish();
        std::vector<Rational> around = constants_;
        for (std::size_t i = n > k_ ? n - k_ : 0; i < n; ++i) around.push_back(word_[i].as_number());
        for (const Rational& r : order_slots(around)) {
            word_.push_back(Letter(r));
            if (conforming_so_far() && grow()) return true;
            word_.pop_back();
            if (exhausted_) return false;
        }
        return false;
    }
    bool conforming_so_far() const {
        return conforms(spec_, word_) && (word_.size() <= k_ || run_from(pa_, pa_.initial(), head(), tail()));
    }
    std::span<const Letter> head() const { return std::span<const Letter>(word_).subspan(0, k_); }
    std::span<const Letter> tail() const { return std::span<const Letter>(word_).subspan(k_); }
    bool after_prefix() const {
        auto p = run_from(pa_, pa_.initial(), head(), tail());
        return p && pa_.is_final(*p);
    }
    bool after_loop() {
        Word w1(word_.begin(), word_.begin() + static_cast<long>(lens_[0]));
        Word w2(word_.begin() + static_cast<long>(lens_[0]), word_.end());
        auto q = run_from(wa_, wa_.initial(), last_k(w1, k_), w2);
        if (!q) return false;
        auto back = run_from(wa_, *q, last_k(w1, k_), w2);
        if (!back || *back != *q) return false;
        state_ = *q;
        return true;
    }
    bool finish() {
        auto at = [&](std::size_t a, std::size_t b) {
            return Word(word_.begin() + static_cast<long>(a), word_.begin() + static_cast<long>(b));
        };
        Witness wt{at(0, lens_[0]), at(lens_[0], lens_[0] + lens_[1]), at(lens_[0] + lens_[1], word_.size()), state_};
        if (!verify_witness(pa_, wa_, spec_, wt)) return false;
        found_ = std::move(wt);
        return true;
    }

    const Ksla& pa_;
    const Ksla& wa_;
    const InputSpecifier& spec_;
    std::size_t k_;
    std::size_t budget_;
    std::vector<Rational> constants_;
    std::array<std::size_t, 3> lens_{};
    Word word_;
    StateId state_ = 0;
    std::optional<Witness> found_;
    std::size_t nodes_ = 0;
    bool exhausted_ = false;
};

} // namespace detail

/// Boundedness for any theory: exact for finite theories, otherwise a bounded witness
/// search whose positive answers are verified and whose negative answers are Unknown.
inline BoundednessVerdict check_bounded(const Ksla& prefix, const Ksla& window, const InputSpecifier& spec,
                                        const BoundednessOptions& opt = {}) {
    const Theory& t = prefix.theory();
    if (t.kind() == TheoryKind::Finite) return check_bounded_finite(prefix, window, spec, opt);
    require_same_theory(prefix, window);
    require_same_theory(prefix, spec.automaton);
    BoundednessVerdict v;
    if (!t.capabilities().has_completion_property || t.kind() != TheoryKind::DenseOrder) {
        v.reason = "theory " + t.describe() + " offers no decision procedure for bounded memory";
        return v;
    }
    if (!prefix.deterministic() || !window.deterministic() || !spec.automaton.deterministic())
        throw PreconditionError("boundedness analysis needs deterministic automata");
    validate_input_specifier(spec.automaton);
    if (opt.search_depth == 0) {
        v.reason = "witness search disabled";
        return v;
    }
    detail::DenseSearch search(prefix, window, spec, opt.search_nodes);
    if (auto wt = search.run(opt.search_depth)) {
        v.kind = BoundednessVerdict::Kind::Unbounded;
        v.witness = std::move(wt);
        v.reason = "a conforming stream pumps start indices into window state " + detail::state_label(window, v.witness->state);
        return v;
    }
    v.reason = search.exhausted() ? "witness search ran out of budget" : "no witness up to the search depth";
    return v;
}

/// Verdict for every pair of an expression; the expression is bounded iff every pair is.
inline std::vector<BoundednessVerdict> check_bounded(const WindowExpression& expr, const InputSpecifier& spec,
                                                     const BoundednessOptions& opt = {}) {
    std::vector<BoundednessVerdict> out;
    for (const auto& p : expr.pairs()) out.push_back(check_bounded(p.prefix, p.window, spec, opt));
    return out;
}

struct UsageReport {
    std::size_t max_indices = 0;
    std::size_t max_panes = 0;
    std::size_t streams = 0;
    /// The node limit was hit before every stream was visited.
    bool partial = false;
};

/// Runs the processor over every conforming stream of length up to `horizon` (finite theories)
/// and records the peak number of tracked start indices and panes.
inline UsageReport simulate_max_usage(const WindowExpression& expr, const InputSpecifier& spec, std::size_t horizon,
                                      std::size_t node_limit = 2000000) {
    const Theory& t = expr.theory();
    const auto letters = t.enumerate_letters();
    auto shared = std::make_shared<const WindowExpression>(expr);
    UsageReport r;
    std::size_t nodes = 0;
    Word w;
    auto rec = [&](auto& self, const Processor<CountAggregator>& proc) -> void {
        if (w.size() == horizon) {
            ++r.streams;
            return;
        }
        for (const auto& l : letters) {
            if (++nodes > node_limit) {
                r.partial = true;
                return;
            }
            w.push_back(l);
            if (conforms(spec, w)) {
                Processor<CountAggregator> next = proc;
                next.step(l);
                auto rep = next.pane_report();
                r.max_indices = std::max(r.max_indices, rep.indices);
                r.max_panes = std::max(r.max_panes, rep.panes);
                self(self, next);
            } else {
                ++r.streams;
            }
            w.pop_back();
            if (r.partial) return;
        }
    };
    rec(rec, Processor<CountAggregator>(shared, CountAggregator{}));
    return r;
}

} // namespace winex

#endif // WINEX_BOUNDEDNESS_HPP
