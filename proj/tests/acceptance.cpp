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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "winex/app/commands.hpp"
#include "winex/boundedness.hpp"
#include "winex/processor.hpp"
#include "winex/smso.hpp"
#include "winex/smso_compile.hpp"

using namespace winex;

namespace {

const std::filesystem::path samples = WINEX_SAMPLES_DIR;

/// Thrown by `require` to stop a criterion at its first disagreement.
struct Mismatch {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Mismatch{what};
}

std::string show(const Word& w) { return "'" + to_string(std::span<const Letter>(w)) + "'"; }

oracle::WindowSet emitted(const WindowExpression& e, const Word& w) {
    oracle::WindowSet out;
    for (const auto& o : run_stream(e, CountAggregator{}, w)) out.insert({o.pair, o.start, o.end});
    return out;
}

// 1. Processor output against the window oracles on every short word.
std::string processor_correctness() {
    auto exprs = corpus::finite_expressions();
    std::size_t words = 0;
    for (const auto& [name, e] : exprs)
        oracle::for_each_word(e.theory().enumerate_letters(), 0, 8, [&](const Word& w) {
            auto got = emitted(e, w);
            require(got == windows_oracle(e, w), name + " differs from windows_oracle on " + show(w));
            require(got == oracle::windows(e, w), name + " differs from the path oracle on " + show(w));
            ++words;
        });
    return std::to_string(exprs.size()) + " expressions, " + std::to_string(words) + " words";
}

// 2. Closure constructions against language oracles.
struct LangCase {
    Theory theory;
    const char* sre;
};

std::string closure_constructions() {
    const Theory ab0 = Theory::finite({"a", "b"}, 0), ab1 = Theory::finite({"a", "b"}, 1);
    const Theory d1 = Theory::dense(1), d2 = Theory::dense(2);
    const std::vector<std::vector<LangCase>> suites{
        {{ab0, "[x0 in{a}]* . [x0 in{b}]"},
         {ab0, "([x0 in{a}] + [x0 in{b}])* . [x0 in{a}] . [x0 in{b}]"},
         {ab0, "([x0 in{a}] . [x0 in{b}])*"},
         {ab0, "[x0 in{a}] + [x0 in{b}] . [x0 in{b}]*"}},
        {{ab1, "[x0 = x-1]*"}, {ab1, "[true]* . [x0 != x-1] . [x0 in{a}]"}, {ab1, "([x0 in{b}] + [x-1 in{a}])*"}},
        {{d1, "[x0 > x-1]*"}, {d1, "[true]* . [x0 = x-1] . [x0 < 1]"}, {d1, "([x0 > x-1] + [x0 <= 0])* . [x0 >= 2]"}},
        {{d2, "[x-1 > x-2 && x-1 >= x0]* . [true]"}, {d2, "([x0 > x-2] . [x0 < x-1])*"}, {d2, "[x0 >= x-2]*"}},
    };
    std::size_t checks = 0;
    auto words_of = [](const Theory& t) {
        std::vector<Word> ws;
        if (t.kind() == TheoryKind::Finite) {
            oracle::for_each_word(t.enumerate_letters(), 0, 6, [&](const Word& w) { ws.push_back(w); });
        } else {
            std::mt19937 rng(42);
            std::uniform_int_distribution<std::size_t> len(0, 7);
            for (int i = 0; i < 1000; ++i) ws.push_back(oracle::random_numbers(rng, len(rng), 0, 2));
        }
        return ws;
    };
    auto same = [&](const Ksla& got, const std::vector<Word>& ws, const std::function<bool(const Word&)>& want,
                    const std::string& what) {
        for (const auto& w : ws) {
            require(accepts(got, w) == want(w), what + " on " + show(w));
            ++checks;
        }
    };
    for (const auto& suite : suites) {
        const auto ws = words_of(suite.front().theory);
        std::vector<Ksla> nfas;
        for (const auto& c : suite) nfas.push_back(compile_sre(parse_sre(c.sre, c.theory)));
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const Ksla& a = nfas[i];
            const std::size_t k = a.lookback();
            std::string name = suite[i].sre;
            Ksla d = determinize(a);
            require(certify_deterministic(d), "determinize of " + name + " is not deterministic");
            same(d, ws, [&](const Word& w) { return oracle::brute_accepts(a, w); }, "determinize " + name);
            same(complement(a), ws, [&](const Word& w) { return w.size() >= k && !oracle::brute_accepts(a, w); },
                 "complement " + name);
            for (std::size_t j = 0; j < suite.size(); ++j) {
                const Ksla& b = nfas[j];
                std::string pair = name + " with " + suite[j].sre;
                same(product_intersect(a, b), ws,
                     [&](const Word& w) { return oracle::brute_accepts(a, w) && oracle::brute_accepts(b, w); },
                     "intersection of " + pair);
                same(unite(a, b), ws,
                     [&](const Word& w) { return oracle::brute_accepts(a, w) || oracle::brute_accepts(b, w); },
                     "union of " + pair);
                same(concat_k(a, b), ws, [&](const Word& w) { return oracle::concat_accepts(a, b, w); },
                     "concatenation of " + pair);
            }
        }
    }
    return std::to_string(checks) + " membership checks";
}

// 3. Compiled formulas against direct semantic evaluation.
std::string formula_compilation() {
    const Theory ab0 = Theory::finite({"a", "b"}, 0), ab1 = Theory::finite({"a", "b"}, 1);
    const std::vector<std::pair<Theory, const char*>> formulas{
        {ab0, "[x0 in{b}](xe)"},
        {ab0, "!(exists y <= xe . (xb <= y & [x0 in{b}](y)))"},
        {ab0, "exists y <= xe . (xb < y & y < xe & [x0 in{a}](y))"},
        {ab0, "xb = xe | [x0 in{b}](xb) & !([x0 in{b}](xe))"},
        {ab0, "exists X <= xe . (X(xb) & X(xe) & !(exists y <= xe . (X(y) & [x0 in{b}](y))))"},
        {ab0, "exists X <= xe . (X(xb) & !(exists y <= xe . (y < xb & X(y))) & "
              "!(exists y <= xe . (X(y) & [x0 in{a}](y))))"},
        {ab1, "exists y <= xe . (xb <= y & [x0 = x-1](y))"},
    };
    for (const auto& [t, text] : formulas) {
        GuardedFormula f = parse_formula(text, t);
        WindowExpression e = compile_formula_to_pairs(f);
        oracle::for_each_word(t.enumerate_letters(), 0, 6, [&](const Word& w) {
            std::set<std::pair<std::size_t, std::size_t>> got;
            for (auto [p, b, en] : oracle::windows(e, w)) got.emplace(b, en);
            require(got == windows_bruteforce(w, f), std::string(text) + " on " + show(w));
        });
    }
    return std::to_string(formulas.size()) + " formulas";
}

// 4. Memory predictions for a*b windows with and without aaa infixes.
std::string boundedness_predictions() {
    const Theory& ab = corpus::ab0();
    WindowPair p = compile_sre_pair("([x0 in{a}] + [x0 in{b}])*", "[x0 in{a}]* . [x0 in{b}]", ab);
    WindowExpression e(ab);
    e.add(p.prefix, p.window);
    auto any = universal_specifier(ab);
    auto no_aaa = avoid_specifier(parse_sre("[x0 in{a}] . [x0 in{a}] . [x0 in{a}]", ab));

    auto u = check_bounded_finite(p.prefix, p.window, any);
    require(u.kind == BoundednessVerdict::Kind::Unbounded, std::string("universal specifier: ") + to_string(u.kind));
    require(u.witness && verify_witness(p.prefix, p.window, any, *u.witness), "witness rejected");
    Processor<CountAggregator> proc(e);
    for (const auto& l : u.witness->w1) proc.step(l);
    for (int r = 0; r < 5; ++r)
        for (const auto& l : u.witness->w2) proc.step(l);
    require(proc.pane_report().indices >= 5,
            "pumped witness tracks " + std::to_string(proc.pane_report().indices) + " indices");

    auto b = check_bounded_finite(p.prefix, p.window, no_aaa);
    require(b.kind == BoundednessVerdict::Kind::Bounded && b.bounds, std::string("no-aaa specifier: ") + to_string(b.kind));

    std::vector<std::size_t> grow, flat;
    for (std::size_t n : {6u, 9u, 12u}) {
        grow.push_back(simulate_max_usage(e, any, n).max_indices);
        auto s = simulate_max_usage(e, no_aaa, n);
        require(!s.partial, "simulation incomplete");
        require(s.max_panes <= b.bounds->panes, "pane bound exceeded");
        flat.push_back(s.max_indices);
    }
    require(grow[0] < grow[1] && grow[1] < grow[2], "universal peaks do not grow");
    require(flat[0] == flat[1] && flat[1] == flat[2] && flat[2] <= b.bounds->indices, "no-aaa peaks are not stable");
    std::ostringstream os;
    os << "peaks " << grow[0] << "/" << grow[1] << "/" << grow[2] << " vs " << flat[0] << "/" << flat[1] << "/"
       << flat[2] << ", bound " << b.bounds->indices;
    return os.str();
}

// 5. Runtime invariants on long random streams.
std::string main_loop_invariants() {
    const std::size_t steps = 10000;
    std::mt19937 rng(2024);
    auto all = corpus::finite_expressions();
    auto dense = corpus::dense_expressions();
    all.insert(all.end(), dense.begin(), dense.end());
    for (const auto& [name, e] : all) {
        Processor<CountAggregator> p(e, CountAggregator{}, ProcessorOptions{true});
        Word w = e.theory().kind() == TheoryKind::Finite ? oracle::random_symbols(rng, steps, e.theory().alphabet())
                                                         : oracle::random_numbers(rng, steps, 0, 4);
        for (const auto& l : w) p.step(l);
        if (p.violations()) throw Mismatch{name + ": " + p.violation_messages().front()};
    }
    // Same check through the command-line run path.
    for (const char* cfg : {"astarb.json", "stock.json"}) {
        bool finite = std::string(cfg) == "astarb.json";
        std::string input;
        for (std::size_t i = 0; i < steps; ++i)
            input += finite ? std::string("{\"sym\":\"") + "ab"[rng() % 2] + "\"}\n"
                            : "{\"price\":" + std::to_string(rng() % 5) + "}\n";
        std::istringstream in(input);
        std::ostringstream out, err;
        int code = app::cmd_run(samples / cfg, in, out, err, app::RunOptions{true, 0});
        require(code == app::exit_code::ok, std::string(cfg) + ": " + err.str());
    }
    return std::to_string(all.size() + 2) + " streams of " + std::to_string(steps) + " steps";
}

// 6. Pane-combined aggregates against direct folds.
std::string pane_aggregation() {
    const AggregateKind kinds[] = {AggregateKind::Count, AggregateKind::Sum,   AggregateKind::Min,
                                   AggregateKind::Max,   AggregateKind::First, AggregateKind::Last,
                                   AggregateKind::Average};
    auto exprs = corpus::dense_expressions();
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> den(1, 7);
    std::size_t windows = 0;
    for (int s = 0; s < 100; ++s) {
        const auto& [name, e] = exprs[s % exprs.size()];
        Word w = oracle::random_numbers(rng, 300, -6, 6);
        if (s % 2)
            for (auto& l : w) l = Letter(l.as_number() / den(rng));
        for (AggregateKind kind : kinds)
            for (const auto& o : run_stream(e, SummaryAggregator(kind), w)) {
                SummaryAggregator direct(kind);
                Summary acc = direct.empty();
                for (std::size_t i = o.start; i <= o.end; ++i) direct.add(acc, w[i].as_number());
                SummaryValue want = direct.finalize(acc);
                if (kind == AggregateKind::Average) {
                    require(o.aggregate.approx && want.approx, name + ": missing average");
                    double a = *o.aggregate.approx, b = *want.approx;
                    require(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)), name + ": average drifted");
                } else {
                    require(o.aggregate.exact == want.exact, name + ": exact aggregate differs");
                }
                ++windows;
            }
    }
    return "100 streams, " + std::to_string(windows) + " windows";
}

// 7. Stock rises and WPM peaks through the configured pipeline.
std::vector<std::pair<std::size_t, std::size_t>> pipeline_windows(const std::filesystem::path& config,
                                                                  const std::string& input) {
    auto cfg = app::load_config(config);
    auto compiled = app::compile_pipeline(cfg);
    std::istringstream in(input);
    std::ostringstream out, diag;
    auto sum = app::run_pipeline(cfg, compiled, in, out, diag);
    require(sum.rejected == 0, diag.str());
    std::vector<std::pair<std::size_t, std::size_t>> r;
    std::istringstream lines(out.str());
    for (std::string line; std::getline(lines, line);) {
        auto j = Json::parse(line);
        r.emplace_back(j["start"].get<std::size_t>(), j["end"].get<std::size_t>());
    }
    return r;
}

std::string worked_examples() {
    using Spans = std::vector<std::pair<std::size_t, std::size_t>>;
    std::string stock;
    for (int v : {1, 2, 3, 2}) stock += "{\"price\":" + std::to_string(v) + "}\n";
    require(pipeline_windows(samples / "stock.json", stock) == Spans{{1, 1}, {2, 2}}, "stock windows");

    const int p = 3;
    std::mt19937 rng(50);
    std::size_t peaks = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> r(50);
        for (auto& x : r) x = static_cast<int>(rng() % 7);
        std::string csv = "t,r\n";
        for (std::size_t i = 0; i < r.size(); ++i) csv += std::to_string(i) + "," + std::to_string(r[i]) + "\n";
        Spans want;
        for (std::size_t i = 1; i + 1 < r.size(); ++i)
            if (r[i] >= r[i - 1] && r[i] >= r[i + 1] && r[i] >= p) want.emplace_back(i + 1, i + 1);
        require(pipeline_windows(samples / "wpm.json", csv) == want, "peaks differ in trial " + std::to_string(trial));
        peaks += want.size();
    }
    return "stock exact, " + std::to_string(peaks) + " peaks over 20 streams";
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<std::string()>>> criteria{
        {"processor correctness", processor_correctness},
        {"closure constructions", closure_constructions},
        {"formula compilation", formula_compilation},
        {"boundedness predictions", boundedness_predictions},
        {"main-loop invariants", main_loop_invariants},
        {"pane aggregation", pane_aggregation},
        {"worked examples", worked_examples},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        std::string status = "PASS", detail;
        try {
            detail = criteria[i].second();
        } catch (const Mismatch& m) {
            status = "FAIL";
            detail = m.what;
        } catch (const std::exception& e) {
            status = "FAIL";
            detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (status == "FAIL") ++failed;
        std::printf("%s %zu %s (%.1fs): %s\n", status.c_str(), i + 1, criteria[i].first, secs, detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}
