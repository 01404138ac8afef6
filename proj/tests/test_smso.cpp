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

#include <chrono>
#include <random>

#include "support/oracles.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/smso.hpp"
#include "winex/smso_compile.hpp"

using namespace winex;

namespace {

const Theory AB0 = Theory::finite({"a", "b"}, 0);
const Theory AB1 = Theory::finite({"a", "b"}, 1);

struct FormulaCase {
    Theory theory;
    const char* text;
};

const std::vector<FormulaCase>& corpus() {
    static const std::vector<FormulaCase> c{
        {AB0, "[x0 in{b}](xe)"},
        {AB0, "!(exists y <= xe . (xb <= y & [x0 in{b}](y)))"},
        {AB0, "exists y <= xe . (xb < y & y < xe & [x0 in{a}](y))"},
        {AB0, "xb = xe | [x0 in{b}](xb) & !([x0 in{b}](xe))"},
        {AB0, "exists X <= xe . (X(xb) & X(xe) & !(exists y <= xe . (X(y) & [x0 in{b}](y))))"},
        {AB0, "exists X <= xe . (X(xb) & !(exists y <= xe . (y < xb & X(y))) & "
              "!(exists y <= xe . (X(y) & [x0 in{a}](y))))"},
        {AB1, "exists y <= xe . (xb <= y & [x0 = x-1](y))"},
        {AB1, "[x0 != x-1](xb) & !(xb < xe)"}};
    return c;
}

} // namespace

TEST(Formula, ParsesSugarAndPrints) {
    GuardedFormula f = parse_formula("xb <= xe & [x0 in{a}](xb)", AB0);
    EXPECT_EQ(f.root.kind(), Formula::Kind::And);
    for (const auto& c : corpus()) {
        GuardedFormula g = parse_formula(c.text, c.theory);
        EXPECT_EQ(parse_formula(to_text(g.root), c.theory).root, g.root) << c.text;
    }
}

TEST(Formula, EnforcesTheGuardedFragment) {
    EXPECT_THROW(parse_formula("exists xb <= xe . true", AB0), FragmentViolation);
    EXPECT_THROW(parse_formula("exists y . [x0 in{a}](y)", AB0), FragmentViolation);
    EXPECT_THROW(parse_formula("exists y <= xb . [x0 in{a}](y)", AB0), FragmentViolation);
    EXPECT_THROW(parse_formula("[x0 in{a}](z)", AB0), ScopeError);
    EXPECT_THROW(parse_formula("exists y <= xe . exists y <= xe . true", AB0), ScopeError);
    EXPECT_THROW(parse_formula("[x0 in{a}](xe", AB0), SyntaxError);
    EXPECT_THROW(parse_formula("[x0 > 1](xe)", AB0), TheoryMismatch);
}

TEST(Formula, DirectEvaluation) {
    GuardedFormula f = parse_formula("exists y <= xe . (xb < y & [x0 in{a}](y))", AB0);
    Word w = symbols("bab");
    Assignment asg;
    asg.positions["xb"] = 0;
    asg.positions["xe"] = 2;
    EXPECT_TRUE(eval_formula(w, f, asg));
    asg.positions["xb"] = 1;
    EXPECT_FALSE(eval_formula(w, f, asg));
    asg.positions["xe"] = 7;
    EXPECT_THROW(eval_formula(w, f, asg), AssignmentError);
    Assignment partial;
    partial.positions["xb"] = 0;
    EXPECT_THROW(eval_formula(w, f, partial), AssignmentError);
}

TEST(Formula, LastLetterExample) {
    GuardedFormula f = parse_formula("[x0 in{b}](xe)", AB0);
    auto expected = std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {1, 1}};
    EXPECT_EQ(windows_bruteforce(symbols("ab"), f), expected);
    WindowExpression e = compile_formula_to_pairs(f);
    oracle::WindowSet got = oracle::windows(e, symbols("ab"));
    std::set<std::pair<std::size_t, std::size_t>> plain;
    for (auto [p, b, en] : got) plain.emplace(b, en);
    EXPECT_EQ(plain, expected);
}

TEST(Formula, CompiledPairsMatchBruteForce) {
    for (const auto& c : corpus()) {
        GuardedFormula f = parse_formula(c.text, c.theory);
        WindowExpression e = compile_formula_to_pairs(f);
        ASSERT_GT(e.size(), 0u) << c.text;
        for (const auto& p : e.pairs()) {
            EXPECT_TRUE(p.prefix.deterministic() && p.window.deterministic());
            EXPECT_TRUE(certify_deterministic(p.prefix) && certify_deterministic(p.window)) << c.text;
            EXPECT_TRUE(is_clean(p.prefix) && is_clean(p.window)) << c.text;
            EXPECT_EQ(p.prefix.theory(), c.theory);
        }
        oracle::for_each_word(c.theory.enumerate_letters(), 0, 6, [&](const Word& w) {
            std::set<std::pair<std::size_t, std::size_t>> got;
            for (auto [p, b, en] : oracle::windows(e, w)) got.emplace(b, en);
            ASSERT_EQ(got, windows_bruteforce(w, f)) << c.text << " on " << to_string(std::span<const Letter>(w));
        });
    }
}

TEST(Formula, RecognitionIgnoresTheFuture) {
    std::mt19937 rng(23);
    for (const auto& c : corpus()) {
        GuardedFormula f = parse_formula(c.text, c.theory);
        WindowExpression e = compile_formula_to_pairs(f);
        for (int i = 0; i < 40; ++i) {
            Word w = oracle::random_symbols(rng, 1 + i % 5, {"a", "b"});
            Word longer = w;
            for (const auto& l : oracle::random_symbols(rng, 3, {"a", "b"})) longer.push_back(l);
            auto before = oracle::windows(e, w);
            auto after = oracle::windows(e, longer);
            for (const auto& win : before) EXPECT_TRUE(after.count(win)) << c.text;
            for (const auto& win : after)
                if (std::get<2>(win) < w.size()) EXPECT_TRUE(before.count(win)) << c.text;
        }
    }
}

TEST(Formula, DenseTheoryCompiles) {
    Theory d = Theory::dense(1);
    GuardedFormula f = parse_formula("exists y <= xe . (xb <= y & [x0 > x-1](y)) & [x0 < 1](xe)", d);
    WindowExpression e = compile_formula_to_pairs(f);
    std::mt19937 rng(4);
    for (int i = 0; i < 200; ++i) {
        Word w = oracle::random_numbers(rng, 1 + i % 6, 0, 2);
        std::set<std::pair<std::size_t, std::size_t>> got;
        for (auto [p, b, en] : oracle::windows(e, w)) got.emplace(b, en);
        ASSERT_EQ(got, windows_bruteforce(w, f));
    }
}
