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

#include <random>

#include "support/oracles.hpp"
#include "winex/expand.hpp"
#include "winex/ksla_json.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/predicate_text.hpp"
#include "winex/sre.hpp"

using namespace winex;

namespace {

const Theory AB0 = Theory::finite({"a", "b"}, 0);
const Theory AB1 = Theory::finite({"a", "b"}, 1);
const Theory D1 = Theory::dense(1);
const Theory D2 = Theory::dense(2);

Ksla nfa(const char* sre, const Theory& t) { return compile_sre(parse_sre(sre, t)); }

struct Case {
    Theory theory;
    const char* sre;
};

std::vector<Case> finite_corpus() {
    return {{AB0, "[x0 in{a}]* . [x0 in{b}]"},
            {AB0, "([x0 in{a}] + [x0 in{b}])* . [x0 in{a}] . [x0 in{b}]"},
            {AB0, "([x0 in{a}] . [x0 in{b}])*"},
            {AB0, "[x0 in{a}] + [x0 in{b}] . [x0 in{b}]*"},
            {AB1, "[x0 = x-1]*"},
            {AB1, "[true]* . [x0 != x-1] . [x0 in{a}]"},
            {AB1, "([x0 in{b}] + [x-1 in{a}])*"}};
}

std::vector<Case> dense_corpus() {
    return {{D1, "[x0 > x-1]*"},
            {D1, "[true]* . [x0 = x-1] . [x0 < 1]"},
            {D1, "([x0 > x-1] + [x0 <= 0])* . [x0 >= 2]"},
            {D2, "[x-1 > x-2 && x-1 >= x0]* . [true]"},
            {D2, "([x0 > x-2] . [x0 < x-1])*"}};
}

/// Every {a,b} word up to length 6 plus 1000 random dense words over {0,1,2}.
void for_each_test_word(const Theory& t, const std::function<void(const Word&)>& f) {
    if (t.kind() == TheoryKind::Finite) {
        oracle::for_each_word(t.enumerate_letters(), 0, 6, f);
        return;
    }
    std::mt19937 rng(42);
    std::uniform_int_distribution<std::size_t> len(0, 6);
    for (int i = 0; i < 1000; ++i) f(oracle::random_numbers(rng, len(rng), 0, 2));
}

void expect_same_language(const Ksla& got, const std::function<bool(const Word&)>& want, const char* what) {
    for_each_test_word(got.theory(), [&](const Word& w) {
        ASSERT_EQ(accepts(got, w), want(w)) << what << " on " << to_string(std::span<const Letter>(w));
    });
}

} // namespace

TEST(Ksla, BasicRunsAndConventions) {
    Ksla a = nfa("[x0 > x-1]", D1);
    EXPECT_FALSE(accepts(a, numbers({1})));
    EXPECT_TRUE(accepts(a, numbers({1, 2})));
    EXPECT_FALSE(accepts(a, numbers({2, 1})));
    EXPECT_FALSE(accepts(a, numbers({1, 2, 3})));
    Ksla s = determinize(nfa("[x0 > x-1]*", D1));
    EXPECT_TRUE(accepts(s, numbers({5})));
    auto r = run_accepts(s, numbers({1, 2, 3}));
    ASSERT_TRUE(r.trace);
    EXPECT_EQ(r.trace->states.size(), 3u);
    EXPECT_THROW(accepts(s, symbols("a")), InputTypeError);
}

TEST(Ksla, AddEdgeValidatesAndMerges) {
    Ksla a(AB0, 2);
    a.add_edge(0, 1, parse_predicate("x0 in{a}"));
    a.add_edge(0, 1, parse_predicate("x0 in{b}"));
    EXPECT_EQ(a.edge_count(), 1u);
    EXPECT_THROW(a.add_edge(0, 1, parse_predicate("x-1 in{a}")), MalformedPredicate);
    EXPECT_THROW(a.add_edge(0, 5, Predicate::top()), PreconditionError);
}

TEST(Ksla, DeterminizeKeepsLanguageAndIsCertified) {
    auto all = finite_corpus();
    auto dense = dense_corpus();
    all.insert(all.end(), dense.begin(), dense.end());
    for (const auto& c : all) {
        Ksla n = nfa(c.sre, c.theory);
        Ksla d = determinize(n);
        EXPECT_TRUE(certify_deterministic(d)) << c.sre;
        EXPECT_TRUE(is_clean(d)) << c.sre;
        expect_same_language(d, [&](const Word& w) { return oracle::brute_accepts(n, w); }, c.sre);
    }
}

TEST(Ksla, ComplementIsExclusiveAboveLookback) {
    auto all = finite_corpus();
    auto dense = dense_corpus();
    all.insert(all.end(), dense.begin(), dense.end());
    for (const auto& c : all) {
        Ksla n = nfa(c.sre, c.theory);
        Ksla m = complement(n);
        const std::size_t k = c.theory.lookback();
        expect_same_language(
            m, [&](const Word& w) { return w.size() >= k && !oracle::brute_accepts(n, w); }, c.sre);
    }
}

TEST(Ksla, BinaryConstructionsMatchOracles) {
    for (const auto& corpus : {finite_corpus(), dense_corpus()})
        for (std::size_t i = 0; i < corpus.size(); ++i)
            for (std::size_t j = 0; j < corpus.size(); ++j) {
                if (!(corpus[i].theory == corpus[j].theory)) continue;
                Ksla a = nfa(corpus[i].sre, corpus[i].theory), b = nfa(corpus[j].sre, corpus[j].theory);
                expect_same_language(
                    product_intersect(a, b),
                    [&](const Word& w) { return oracle::brute_accepts(a, w) && oracle::brute_accepts(b, w); },
                    "intersection");
                expect_same_language(
                    unite(a, b),
                    [&](const Word& w) { return oracle::brute_accepts(a, w) || oracle::brute_accepts(b, w); }, "union");
                expect_same_language(
                    concat_k(a, b), [&](const Word& w) { return oracle::concat_accepts(a, b, w); }, "concatenation");
            }
}

TEST(Ksla, ProductReportsComponentPairs) {
    Ksla a = determinize(nfa("[x0 in{a}]* . [x0 in{b}]", AB0));
    Ksla b = determinize(nfa("([x0 in{a}] + [x0 in{b}])*", AB0));
    std::vector<std::pair<StateId, StateId>> pairs;
    Ksla p = product_intersect(a, b, &pairs);
    ASSERT_EQ(pairs.size(), p.size());
    for (StateId q = 0; q < p.size(); ++q)
        EXPECT_EQ(p.is_final(q), a.is_final(pairs[q].first) && b.is_final(pairs[q].second));
    EXPECT_THROW(product_intersect(a, nfa("[true]", AB1)), TheoryMismatch);
}

TEST(Ksla, ExpansionMatchesLanguage) {
    for (const auto& c : finite_corpus()) {
        Ksla n = nfa(c.sre, c.theory);
        ExpandedAutomaton x = expand_finite(n);
        oracle::for_each_word(c.theory.enumerate_letters(), 0, 6, [&](const Word& w) {
            ASSERT_EQ(x.accepts(w), oracle::brute_accepts(n, w)) << c.sre;
        });
    }
    EXPECT_THROW(expand_finite(nfa("[true]", D1)), CapabilityMissing);
}

TEST(Ksla, DeadStatesNeverRecover) {
    std::mt19937 rng(1);
    for (const auto& corpus : {finite_corpus(), dense_corpus()})
        for (const auto& c : corpus) {
            Ksla d = determinize(nfa(c.sre, c.theory));
            const std::size_t k = c.theory.lookback();
            for (StateId dead : dead_states(d)) {
                Word w = c.theory.kind() == TheoryKind::Finite ? oracle::random_symbols(rng, 10000, {"a", "b"})
                                                               : oracle::random_numbers(rng, 10000, 0, 2);
                StateId q = dead;
                for (std::size_t i = k; i < w.size(); ++i) {
                    auto n = step(d, q, std::span<const Letter>(w).subspan(i - k, k + 1));
                    if (!n) break;
                    q = *n;
                    ASSERT_FALSE(d.is_final(q)) << c.sre;
                }
            }
        }
}

TEST(Ksla, CleanDropsUnsatisfiableEdges) {
    Ksla a(D1, 3);
    a.set_final(2);
    a.add_edge(0, 1, parse_predicate("x0 > 1 && x0 < 1"));
    a.add_edge(0, 2, parse_predicate("x0 > x-1"));
    Ksla c = clean(a);
    EXPECT_EQ(c.size(), 2u);
    EXPECT_TRUE(is_clean(c));
    EXPECT_FALSE(is_clean(a));
}

TEST(Ksla, TrackProjectionForgetsTheTrack) {
    Theory t = AB0.with_tracks(1);
    Ksla a(t, 2);
    a.set_final(1);
    a.add_edge(0, 0, parse_predicate("!(t0)"));
    a.add_edge(0, 1, parse_predicate("t0 && x0 in{b}"));
    Ksla p = project_track(a, 0);
    oracle::for_each_word(t.enumerate_letters(), 0, 5, [&](const Word& w) {
        Word plain;
        for (const auto& l : w) plain.push_back(l.with_tracks(0));
        bool some = false;
        oracle::for_each_word(t.enumerate_letters(), w.size(), w.size(), [&](const Word& v) {
            bool same = true;
            for (std::size_t i = 0; i < v.size(); ++i) same = same && v[i].with_tracks(0) == plain[i];
            if (same && oracle::brute_accepts(a, v)) some = true;
        });
        ASSERT_EQ(oracle::brute_accepts(p, plain), some);
    });
    Ksla f = fix_track(a, 0, true);
    EXPECT_TRUE(accepts(f, symbols("b")));
    EXPECT_FALSE(accepts(f, symbols("ab")));
}

TEST(KslaJson, RoundTripIsCanonical) {
    auto all = finite_corpus();
    auto dense = dense_corpus();
    all.insert(all.end(), dense.begin(), dense.end());
    for (const auto& c : all) {
        Ksla d = clean(determinize(nfa(c.sre, c.theory)));
        std::string text = serialize(d);
        Ksla back = ksla_from_json(Json::parse(text));
        EXPECT_EQ(serialize(back), text) << c.sre;
        EXPECT_TRUE(back.deterministic());
        expect_same_language(back, [&](const Word& w) { return accepts(d, w); }, c.sre);
    }
    EXPECT_THROW(ksla_from_json(Json::parse(R"({"k": 0})")), PreconditionError);
    EXPECT_THROW(ksla_from_json(Json::parse(
                     R"({"theory":{"kind":"dense"},"k":0,"states":["q0"],"initial":"q0","finals":[],)"
                     R"("transitions":[{"from":"q0","to":"q0","guard":"x0 in{a}"}]})")),
                 TheoryMismatch);
}
