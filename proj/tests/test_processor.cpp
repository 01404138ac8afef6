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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "winex/aggregator.hpp"
#include "winex/processor.hpp"

using namespace winex;

namespace {

oracle::WindowSet emitted(const WindowExpression& e, const Word& w) {
    oracle::WindowSet out;
    for (const auto& o : run_stream(e, CountAggregator{}, w)) out.insert({o.pair, o.start, o.end});
    return out;
}

Word random_stream(std::mt19937& rng, const Theory& t, std::size_t n) {
    return t.kind() == TheoryKind::Finite ? oracle::random_symbols(rng, n, t.alphabet())
                                          : oracle::random_numbers(rng, n, 0, 4);
}

} // namespace

TEST(Processor, ExampleStream) {
    auto e = corpus::finite_expressions().front().expr;
    auto out = run_stream(e, CountAggregator{}, symbols("abab"));
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> got;
    for (const auto& o : out) got.emplace_back(o.start, o.end, o.aggregate);
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> want{{0, 1, 2}, {1, 1, 1}, {2, 3, 2}, {3, 3, 1}};
    EXPECT_EQ(got, want);
}

TEST(Processor, TracksStartIndicesPerState) {
    auto e = corpus::finite_expressions().front().expr;
    Processor<CountAggregator> p(e);
    for (const auto& l : symbols("aaab")) p.step(l);
    EXPECT_EQ(p.pane_report().indices, 4u);
    p.step(Letter("a"));
    EXPECT_EQ(p.pane_report().indices, 1u);
    EXPECT_EQ(p.position(), 4);
}

TEST(Processor, MatchesOracleOnAllShortWords) {
    for (const auto& [name, e] : corpus::finite_expressions())
        oracle::for_each_word(e.theory().enumerate_letters(), 0, 7, [&](const Word& w) {
            ASSERT_EQ(emitted(e, w), oracle::windows(e, w)) << name << " on " << to_string(std::span<const Letter>(w));
        });
}

TEST(Processor, MatchesOracleOnDenseStreams) {
    std::mt19937 rng(8);
    for (const auto& [name, e] : corpus::dense_expressions())
        for (int i = 0; i < 300; ++i) {
            Word w = oracle::random_numbers(rng, 1 + i % 9, 0, 4);
            ASSERT_EQ(emitted(e, w), oracle::windows(e, w)) << name;
            ASSERT_EQ(emitted(e, w), windows_oracle(e, w)) << name;
        }
}

TEST(Processor, DebugInvariantsHoldOnLongStreams) {
    std::mt19937 rng(99);
    auto all = corpus::finite_expressions();
    auto dense = corpus::dense_expressions();
    all.insert(all.end(), dense.begin(), dense.end());
    for (const auto& [name, e] : all) {
        Processor<CountAggregator> p(e, CountAggregator{}, ProcessorOptions{true});
        std::size_t peak = 0;
        for (const auto& l : random_stream(rng, e.theory(), 3000)) {
            p.step(l);
            peak = std::max(peak, p.pane_report().panes);
        }
        EXPECT_EQ(p.violations(), 0u) << name << ": "
                                      << (p.violation_messages().empty() ? "" : p.violation_messages().front());
        auto panes = p.panes();
        for (std::size_t i = 1; i < panes.size(); ++i) {
            ASSERT_TRUE(panes[i - 1].end.has_value());
            EXPECT_EQ(*panes[i - 1].end + 1, panes[i].start) << name;
        }
    }
}

TEST(Processor, PaneAggregatesEqualDirectFolds) {
    std::mt19937 rng(5);
    const AggregateKind kinds[] = {AggregateKind::Count, AggregateKind::Sum,   AggregateKind::Min,
                                   AggregateKind::Max,   AggregateKind::First, AggregateKind::Last,
                                   AggregateKind::Average};
    for (const auto& [name, e] : corpus::dense_expressions())
        for (AggregateKind kind : kinds) {
            Word w = oracle::random_numbers(rng, 200, -5, 5);
            for (const auto& o : run_stream(e, SummaryAggregator(kind), w)) {
                SummaryAggregator direct(kind);
                Summary s = direct.empty();
                for (std::size_t i = o.start; i <= o.end; ++i) direct.add(s, w[i].as_number());
                SummaryValue want = direct.finalize(s);
                if (kind == AggregateKind::Average) {
                    ASSERT_TRUE(o.aggregate.approx && want.approx);
                    EXPECT_LE(std::abs(*o.aggregate.approx - *want.approx), 1e-9 * std::max(1.0, std::abs(*want.approx)));
                } else {
                    EXPECT_EQ(o.aggregate.exact, want.exact) << name;
                }
            }
        }
}

TEST(Processor, OutputIsDeterministic) {
    std::mt19937 rng(3);
    for (const auto& [name, e] : corpus::dense_expressions()) {
        Word w = oracle::random_numbers(rng, 500, 0, 4);
        auto a = run_stream(e, SumAggregator{}, w);
        auto b = run_stream(e, SumAggregator{}, w);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(std::tie(a[i].pair, a[i].start, a[i].end), std::tie(b[i].pair, b[i].start, b[i].end));
            EXPECT_EQ(a[i].aggregate, b[i].aggregate);
        }
    }
}

TEST(Processor, Preconditions) {
    auto e = corpus::dense_expressions().front().expr;
    EXPECT_THROW(init_processor(e, CountAggregator{}, numbers({1, 2})), PreconditionError);
    auto p = init_processor(e, CountAggregator{}, numbers({1}));
    EXPECT_EQ(p.position(), 0);
    EXPECT_THROW(p.step(Letter("a")), InputTypeError);
    WindowExpression nd(Theory::finite({"a", "b"}, 0));
    nd.add(compile_sre(parse_sre("[true]*", nd.theory())), compile_sre(parse_sre("[true]*", nd.theory())));
    EXPECT_THROW(Processor<CountAggregator>{nd}, PreconditionError);
}
