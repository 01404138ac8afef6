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

#ifndef WINEX_AGGREGATOR_HPP
#define WINEX_AGGREGATOR_HPP

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "winex/error.hpp"
#include "winex/rational.hpp"

namespace winex {

/// Associative aggregation behaviour: add(s, e) must equal combine(s, singleton(e)).
template <class A>
concept Aggregator = requires(const A& agg, typename A::State& s, const typename A::State& c,
                              const typename A::Element& e) {
    typename A::State;
    typename A::Element;
    typename A::Result;
    { agg.empty() } -> std::convertible_to<typename A::State>;
    agg.add(s, e);
    { agg.combine(c, c) } -> std::convertible_to<typename A::State>;
    { agg.finalize(c) } -> std::convertible_to<typename A::Result>;
};

struct CountAggregator {
    using Element = Rational;
    using State = std::size_t;
    using Result = std::size_t;
    State empty() const { return 0; }
    void add(State& s, const Element&) const { ++s; }
    State combine(const State& a, const State& b) const { return a + b; }
    Result finalize(const State& s) const { return s; }
};

struct SumAggregator {
    using Element = Rational;
    using State = Rational;
    using Result = Rational;
    State empty() const { return 0; }
    void add(State& s, const Element& e) const { s += e; }
    State combine(const State& a, const State& b) const { return a + b; }
    Result finalize(const State& s) const { return s; }
};

template <bool Max>
struct ExtremumAggregator {
    using Element = Rational;
    using State = std::optional<Rational>;
    using Result = std::optional<Rational>;
    State empty() const { return std::nullopt; }
    void add(State& s, const Element& e) const {
        if (!s || (Max ? e > *s : e < *s)) s = e;
    }
    State combine(const State& a, const State& b) const {
        if (!a) return b;
        if (!b) return a;
        return (Max ? *b > *a : *b < *a) ? b : a;
    }
    Result finalize(const State& s) const { return s; }
};
using MinAggregator = ExtremumAggregator<false>;
using MaxAggregator = ExtremumAggregator<true>;

/// Exact running sum and count; the mean is rounded to double only when finalized.
struct AverageAggregator {
    using Element = Rational;
    using State = std::pair<Rational, std::size_t>;
    using Result = std::optional<double>;
    State empty() const { return {Rational(0), 0}; }
    void add(State& s, const Element& e) const {
        s.first += e;
        ++s.second;
    }
    State combine(const State& a, const State& b) const { return {a.first + b.first, a.second + b.second}; }
    Result finalize(const State& s) const {
        if (s.second == 0) return std::nullopt;
        return to_double(s.first / s.second);
    }
};

template <bool Last>
struct EndpointAggregator {
    using Element = Rational;
    using State = std::optional<Rational>;
    using Result = std::optional<Rational>;
    State empty() const { return std::nullopt; }
    void add(State& s, const Element& e) const {
        if (Last || !s) s = e;
    }
    State combine(const State& a, const State& b) const {
        if (Last) return b ? b : a;
        return a ? a : b;
    }
    Result finalize(const State& s) const { return s; }
};
using FirstAggregator = EndpointAggregator<false>;
using LastAggregator = EndpointAggregator<true>;

enum class AggregateKind { Count, Sum, Min, Max, Average, First, Last };

inline AggregateKind aggregate_kind(const std::string& name) {
    if (name == "count") return AggregateKind::Count;
    if (name == "sum") return AggregateKind::Sum;
    if (name == "min") return AggregateKind::Min;
    if (name == "max") return AggregateKind::Max;
    if (name == "average" || name == "avg" || name == "mean") return AggregateKind::Average;
    if (name == "first") return AggregateKind::First;
    if (name == "last") return AggregateKind::Last;
    throw PreconditionError("unknown aggregate '" + name + "'");
}

/// All built-in statistics at once; the reported one is chosen at finalization.
struct Summary {
    std::size_t count = 0;
    Rational sum = 0;
    std::optional<Rational> min, max, first, last;
};

struct SummaryValue {
    AggregateKind kind = AggregateKind::Count;
    std::optional<Rational> exact;
    std::optional<double> approx;
};

class SummaryAggregator {
public:
    using Element = Rational;
    using State = Summary;
    using Result = SummaryValue;

    explicit SummaryAggregator(AggregateKind kind = AggregateKind::Count) : kind_(kind) {}

    State empty() const { return {}; }
    void add(State& s, const Element& e) const {
        ++s.count;
        s.sum += e;
        if (!s.min || e < *s.min) s.min = e;
        if (!s.max || e > *s.max) s.max = e;
        if (!s.first) s.first = e;
        s.last = e;
    }
    State combine(const State& a, const State& b) const {
        State r;
        r.count = a.count + b.count;
        r.sum = a.sum + b.sum;
        r.min = MinAggregator{}.combine(a.min, b.min);
        r.max = MaxAggregator{}.combine(a.max, b.max);
        r.first = a.first ? a.first : b.first;
        r.last = b.last ? b.last : a.last;
        return r;
    }
    Result finalize(const State& s) const {
        Result r{kind_, std::nullopt, std::nullopt};
        switch (kind_) {
        case AggregateKind::Count: r.exact = Rational(s.count); break;
        case AggregateKind::Sum: r.exact = s.sum; break;
        case AggregateKind::Min: r.exact = s.min; break;
        case AggregateKind::Max: r.exact = s.max; break;
        case AggregateKind::First: r.exact = s.first; break;
        case AggregateKind::Last: r.exact = s.last; break;
        case AggregateKind::Average:
            if (s.count) r.approx = to_double(s.sum / s.count);
            break;
        }
        return r;
    }
    AggregateKind kind() const noexcept { return kind_; }

private:
    AggregateKind kind_;
};

} // namespace winex

#endif // WINEX_AGGREGATOR_HPP
