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
#include "winex/ksla_ops.hpp"
#include "winex/sre.hpp"

using namespace winex;

namespace {

const Theory AB0 = Theory::finite({"a", "b"}, 0);
const Theory AB1 = Theory::finite({"a", "b"}, 1);
const Theory D1 = Theory::dense(1);
const Theory D2 = Theory::dense(2);

const std::vector<std::pair<Theory, const char*>>& corpus() {
    static const std::vector<std::pair<Theory, const char*>> c{
        {AB0, "[x0 in{a}]* . [x0 in{b}]"},
        {AB0, "([x0 in{a}] + [x0 in{b}])*"},
        {AB0, "([x0 in{a}] . [x0 in{b}])* + [x0 in{b}]"},
        {AB0, "[x0 in{a}]** . [x0 in{b}]*"},
        {AB1, "[true]* . [x0 = x-1]"},
        {AB1, "([x0 != x-1] . [x0 in{a}])*"},
        {AB1, "[x-1 in{a} && x0 in{b}] + [true] . [true]"},
        {D1, "[x0 > x-1]*"},
        {D1, "[true]* . [x0 <= x-1] . [x0 > 1]"},
        {D1, "([x0 = x-1] + [x0 < 1/2])*"},
        {D2, "[x0 > x-2]* . [x-1 < x0]"},
        {D2, "([true] . [x0 = x-2])*"}};
    return c;
}

void for_each_test_word(const Theory& t, const std::function<void(const Word&)>& f) {
    if (t.kind() == TheoryKind::Finite) {
        oracle::for_each_word(t.enumerate_letters(), 0, 6, f);
        return;
    }
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> len(0, 6);
    for (int i = 0; i < 1000; ++i) f(oracle::random_numbers(rng, len(rng), 0, 2));
}

} // namespace

TEST(Sre, ParsesAndPrints) {
    Sre r = parse_sre("([x0 in{a}] + [x0 in{b}])* . [x0 in{b}]", AB0);
    EXPECT_EQ(r.kind(), Sre::Kind::Concat);
    EXPECT_EQ(parse_sre(to_text(r), AB0), r);
    for (const auto& [t, text] : corpus()) EXPECT_EQ(parse_sre(to_text(parse_sre(text, t)), t), parse_sre(text, t));
}

TEST(Sre, RejectsMalformedText) {
    EXPECT_THROW(parse_sre("[x0 in{a}", AB0), SyntaxError);
    EXPECT_THROW(parse_sre("[x0 in{a}] +", AB0), SyntaxError);
    EXPECT_THROW(parse_sre("([x0 in{a}]", AB0), SyntaxError);
    EXPECT_THROW(parse_sre("[x0 > 1]", AB0), TheoryMismatch);
    EXPECT_THROW(parse_sre("[x-2 > 1]", D1), MalformedPredicate);
}

TEST(Sre, CompiledAutomatonMatchesDenotation) {
    for (const auto& [t, text] : corpus()) {
        Sre r = parse_sre(text, t);
        Ksla a = compile_sre(r);
        Ksla d = determinize(a);
        for_each_test_word(t, [&](const Word& w) {
            bool want = sre_membership(r, w);
            ASSERT_EQ(oracle::brute_accepts(a, w), want) << text << " on " << to_string(std::span<const Letter>(w));
            ASSERT_EQ(accepts(d, w), want) << text;
        });
    }
}

TEST(Sre, UnionAndConcatenationAreCompositional) {
    for (std::size_t i = 0; i < corpus().size(); ++i)
        for (std::size_t j = 0; j < corpus().size(); ++j) {
            const auto& [t1, s1] = corpus()[i];
            const auto& [t2, s2] = corpus()[j];
            if (!(t1 == t2)) continue;
            Sre a = parse_sre(s1, t1), b = parse_sre(s2, t2);
            Ksla u = compile_sre(Sre::union_of(a, b)), c = compile_sre(Sre::concat(a, b));
            Ksla ca = compile_sre(a), cb = compile_sre(b);
            for_each_test_word(t1, [&](const Word& w) {
                ASSERT_EQ(oracle::brute_accepts(u, w), sre_membership(a, w) || sre_membership(b, w));
                ASSERT_EQ(oracle::brute_accepts(c, w), oracle::concat_accepts(ca, cb, w)) << s1 << " . " << s2;
            });
        }
}

TEST(Sre, ConcatenationOverlapsByLookback) {
    // x = x-1 on the shared letter: "ab" . "bb" overlaps in one letter for k = 1.
    Sre r = parse_sre("[x-1 in{a} && x0 in{b}] . [x-1 in{b} && x0 in{b}]", AB1);
    EXPECT_TRUE(sre_membership(r, symbols("abb")));
    EXPECT_FALSE(sre_membership(r, symbols("abbb")));
    EXPECT_TRUE(accepts(determinize(compile_sre(r)), symbols("abb")));
    // An empty left factor is allowed: a*.b accepts the single letter b.
    Sre s = parse_sre("[x0 in{a}]* . [x0 in{b}]", AB0);
    EXPECT_TRUE(sre_membership(s, symbols("b")));
    EXPECT_TRUE(accepts(compile_sre(s), symbols("b")));
}

TEST(Sre, StarAcceptsExactlyLookbackLengthWords) {
    Sre s = parse_sre("[x0 > x-1]*", D1);
    EXPECT_TRUE(sre_membership(s, numbers({3})));
    EXPECT_FALSE(sre_membership(s, Word{}));
    EXPECT_TRUE(sre_membership(s, numbers({1, 2, 3})));
    EXPECT_FALSE(sre_membership(s, numbers({1, 3, 2})));
}
