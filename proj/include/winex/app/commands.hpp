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

#ifndef WINEX_APP_COMMANDS_HPP
#define WINEX_APP_COMMANDS_HPP

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "winex/aggregator.hpp"
#include "winex/app/config.hpp"
#include "winex/app/records.hpp"
#include "winex/boundedness.hpp"
#include "winex/error.hpp"
#include "winex/ksla_json.hpp"
#include "winex/processor.hpp"

namespace winex::app {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int unbounded = 1;
inline constexpr int invalid = 2;
inline constexpr int capability = 3;
inline constexpr int unknown = 4;
} // namespace exit_code

/// Keeps every statistic so each pair can report its own aggregate.
struct SummaryState : SummaryAggregator {
    using Result = Summary;
    SummaryState() : SummaryAggregator(AggregateKind::Count) {}
    Result finalize(const State& s) const { return s; }
};

/// JSON text of an aggregate: integers and terminating decimals as numbers, other
/// rationals as "p/q" strings, averages as doubles, null when undefined.
inline std::string format_aggregate(const Summary& s, AggregateKind kind) {
    SummaryValue v = SummaryAggregator(kind).finalize(s);
    if (v.approx) return Json(*v.approx).dump();
    if (!v.exact) return "null";
    if (auto d = to_decimal_string(*v.exact)) return *d;
    return Json(to_string(*v.exact)).dump();
}

inline Json word_json(const Word& w) {
    Json a = Json::array();
    for (const auto& l : w) a.push_back(l.to_string());
    return a;
}

inline Json verdict_json(const BoundednessVerdict& v) {
    Json j;
    j["verdict"] = to_string(v.kind);
    if (v.witness)
        j["witness"] = Json{{"w1", word_json(v.witness->w1)},
                            {"w2", word_json(v.witness->w2)},
                            {"w3", word_json(v.witness->w3)},
                            {"state", "q" + std::to_string(v.witness->state)}};
    if (v.bounds) j["bounds"] = Json{{"indices", v.bounds->indices}, {"panes", v.bounds->panes}};
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

/// Runs `body` and maps library errors to exit codes, printing diagnostics to `err`.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const CapabilityMissing& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::capability;
    } catch (const ResourceExhausted& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::capability;
    } catch (const SpecifierError& e) {
        err << "invalid specifier: " << e.what() << "\n";
        return exit_code::invalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::invalid;
    }
}

inline void write_compiled(const CompiledPipeline& p, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / "expression.json");
    if (!f) throw PreconditionError("cannot write " + (dir / "expression.json").string());
    f << to_json(p.expression).dump(2) << "\n";
}

struct RunOptions {
    bool debug_invariants = false;
    std::size_t report_every = 0;
};

struct RunSummary {
    std::size_t records = 0;
    std::size_t rejected = 0;
    std::size_t windows = 0;
    std::size_t violations = 0;
};

/// Streams `in` through the compiled pipeline, writing one JSONL line per window to `out`.
/// Rejected records and pane reports go to `diag`.
inline RunSummary run_pipeline(const PipelineConfig& cfg, const CompiledPipeline& compiled, std::istream& in,
                               std::ostream& out, std::ostream& diag, const RunOptions& opt = {}) {
    RecordDecoder decoder(cfg.theory, cfg.input);
    Processor<SummaryState> proc(compiled.expression, SummaryState(), ProcessorOptions{opt.debug_invariants});
    RunSummary sum;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::optional<StreamRecord> rec;
        try {
            rec = decoder.decode(line, line_no);
        } catch (const RecordRejected& e) {
            diag << "rejected: " << e.what() << "\n";
            ++sum.rejected;
            continue;
        }
        if (!rec) continue;
        ++sum.records;
        for (const auto& w : proc.step(rec->letter, rec->value)) {
            out << "{\"pair\":" << w.pair << ",\"start\":" << w.start << ",\"end\":" << w.end
                << ",\"aggregate\":" << format_aggregate(w.aggregate, compiled.aggregates[w.pair]) << "}\n";
            ++sum.windows;
        }
        if (opt.report_every && sum.records % opt.report_every == 0) {
            auto r = proc.pane_report();
            diag << Json{{"position", rec->position}, {"indices", r.indices}, {"panes", r.panes}}.dump() << "\n";
        }
    }
    sum.violations = proc.violations();
    for (const auto& m : proc.violation_messages()) diag << "invariant: " << m << "\n";
    return sum;
}

inline int cmd_compile(const std::filesystem::path& config, const std::filesystem::path& out_dir, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_config(config);
        write_compiled(compile_pipeline(cfg), out_dir);
        return exit_code::ok;
    });
}

inline int cmd_run(const std::filesystem::path& config, std::istream& in, std::ostream& out, std::ostream& err,
                   const RunOptions& opt = {}) {
    return guarded(err, [&] {
        auto cfg = load_config(config);
        auto compiled = compile_pipeline(cfg);
        auto s = run_pipeline(cfg, compiled, in, out, err, opt);
        if (s.rejected) err << s.rejected << " record(s) rejected\n";
        if (s.violations) {
            err << s.violations << " invariant violation(s)\n";
            return exit_code::unknown;
        }
        return exit_code::ok;
    });
}

inline int cmd_check(const std::filesystem::path& config, std::size_t budget, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_config(config);
        auto compiled = compile_pipeline(cfg);
        auto spec = specifier_from_config(cfg);
        BoundednessOptions opt;
        opt.search_depth = budget;
        auto verdicts = check_bounded(compiled.expression, spec, opt);
        BoundednessVerdict overall;
        overall.kind = BoundednessVerdict::Kind::Bounded;
        Bounds total;
        bool all_bounds = true;
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
            const auto& v = verdicts[i];
            if (v.kind == BoundednessVerdict::Kind::Unbounded && overall.kind != BoundednessVerdict::Kind::Unbounded) {
                overall = v;
                overall.reason = "pair " + std::to_string(i) + ": " + v.reason;
            } else if (v.kind == BoundednessVerdict::Kind::Unknown &&
                       overall.kind == BoundednessVerdict::Kind::Bounded) {
                overall.kind = v.kind;
                overall.reason = "pair " + std::to_string(i) + ": " + v.reason;
            }
            if (v.bounds) total.indices += v.bounds->indices;
            else all_bounds = false;
        }
        if (overall.kind == BoundednessVerdict::Kind::Bounded) {
            if (all_bounds) overall.bounds = Bounds{total.indices, 2 * total.indices + 1};
            if (verdicts.size() == 1) overall.reason = verdicts.front().reason;
        }
        Json report = verdict_json(overall);
        if (verdicts.size() > 1) {
            report["pairs"] = Json::array();
            for (const auto& v : verdicts) report["pairs"].push_back(verdict_json(v));
        }
        out << report.dump() << "\n";
        switch (overall.kind) {
        case BoundednessVerdict::Kind::Bounded: return exit_code::ok;
        case BoundednessVerdict::Kind::Unbounded: return exit_code::unbounded;
        default: return exit_code::unknown;
        }
    });
}

inline int cmd_simulate(const std::filesystem::path& config, std::size_t horizon, std::ostream& out,
                        std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_config(config);
        if (cfg.theory.kind() != TheoryKind::Finite) throw CapabilityMissing("simulation enumerates letters of a finite theory");
        auto compiled = compile_pipeline(cfg);
        auto r = simulate_max_usage(compiled.expression, specifier_from_config(cfg), horizon);
        out << Json{{"horizon", horizon},
                    {"max_indices", r.max_indices},
                    {"max_panes", r.max_panes},
                    {"streams", r.streams},
                    {"partial", r.partial}}
                   .dump()
            << "\n";
        return exit_code::ok;
    });
}

} // namespace winex::app

#endif // WINEX_APP_COMMANDS_HPP
