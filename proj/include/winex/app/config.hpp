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

#ifndef WINEX_APP_CONFIG_HPP
#define WINEX_APP_CONFIG_HPP

// Pipeline configuration file (JSON):
//
//   {
//     "theory":  {"kind": "finite", "alphabet": ["a", "b"], "k": 0}
//              | {"kind": "dense", "k": 1}
//              | {"kind": "custom", "name": "minimizer", "k": 3},
//     "input":   {"format": "jsonl" | "csv", "letter": FIELD, "value": FIELD?},
//     "windows": [ {"prefix": SRE, "window": SRE, "aggregate": AGG?}
//                | {"formula": FORMULA, "aggregate": AGG?}
//                | {"compiled": PATH, "aggregate": AGG?} ],
//     "specifier": "universal" | {"avoid": SRE} | {"automaton": AUTOMATON}?,
//     "limits":  {"max_out_degree": N, "max_states": N}?
//   }
//
// AGG is count (default), sum, min, max, average, first or last. PATH is a compiled
// expression file, resolved against the configuration's directory.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "winex/aggregator.hpp"
#include "winex/boundedness.hpp"
#include "winex/error.hpp"
#include "winex/ksla_json.hpp"
#include "winex/smso_compile.hpp"
#include "winex/sre.hpp"
#include "winex/window_expression.hpp"

namespace winex::app {

enum class InputFormat { Jsonl, Csv };

struct InputMapping {
    InputFormat format = InputFormat::Jsonl;
    std::string letter_field;
    std::string value_field;
};

struct Definition {
    enum class Kind { Sre, Formula, Compiled };
    Kind kind = Kind::Sre;
    std::string prefix, window, formula;
    std::filesystem::path compiled;
    AggregateKind aggregate = AggregateKind::Count;
};

struct PipelineConfig {
    Theory theory = Theory::dense(0);
    InputMapping input;
    std::vector<Definition> definitions;
    Json specifier = "universal";
    DeterminizeOptions limits;
};

struct CompiledPipeline {
    WindowExpression expression;
    /// Aggregate and originating definition of every pair.
    std::vector<AggregateKind> aggregates;
    std::vector<std::size_t> definition;
};

inline PipelineConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {}) {
    try {
        if (!j.is_object()) throw PreconditionError("configuration must be a JSON object");
        PipelineConfig c;
        const Json& th = j.at("theory");
        c.theory = theory_from_json(th, th.value("k", std::size_t{0}));
        if (c.theory.kind() == TheoryKind::Custom) c.limits.allow_unchecked = true;

        const Json in = j.value("input", Json::object());
        const std::string fmt = in.value("format", std::string("jsonl"));
        if (fmt == "csv") c.input.format = InputFormat::Csv;
        else if (fmt != "jsonl") throw PreconditionError("unknown input format '" + fmt + "'");
        c.input.letter_field = in.value("letter", std::string("value"));
        c.input.value_field = in.value("value", std::string());

        const Json& defs = j.at("windows");
        if (!defs.is_array() || defs.empty()) throw PreconditionError("\"windows\" must list at least one definition");
        for (const Json& d : defs) {
            Definition def;
            def.aggregate = aggregate_kind(d.value("aggregate", std::string("count")));
            if (d.contains("formula")) {
                def.kind = Definition::Kind::Formula;
                def.formula = d.at("formula").get<std::string>();
            } else if (d.contains("compiled")) {
                def.kind = Definition::Kind::Compiled;
                def.compiled = base_dir / d.at("compiled").get<std::string>();
            } else {
                def.prefix = d.value("prefix", std::string("[true]*"));
                def.window = d.at("window").get<std::string>();
            }
            c.definitions.push_back(std::move(def));
        }
        if (j.contains("specifier")) c.specifier = j.at("specifier");
        if (j.contains("limits")) {
            const Json& l = j.at("limits");
            c.limits.max_out_degree = l.value("max_out_degree", c.limits.max_out_degree);
            c.limits.max_states = l.value("max_states", c.limits.max_states);
        }
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("configuration: ") + e.what());
    }
}

inline Json read_json_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot open " + path.string());
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(path.string() + ": " + e.what());
    }
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_json_file(path), path.parent_path());
}

inline CompiledPipeline compile_pipeline(const PipelineConfig& c) {
    CompiledPipeline out{WindowExpression(c.theory), {}, {}};
    for (std::size_t d = 0; d < c.definitions.size(); ++d) {
        const Definition& def = c.definitions[d];
        std::vector<WindowPair> pairs;
        switch (def.kind) {
        case Definition::Kind::Sre: pairs.push_back(compile_sre_pair(def.prefix, def.window, c.theory, c.limits)); break;
        case Definition::Kind::Formula: {
            auto e = compile_formula_to_pairs(parse_formula(def.formula, c.theory), c.limits);
            pairs = e.pairs();
            break;
        }
        case Definition::Kind::Compiled: {
            auto e = expression_from_json(read_json_file(def.compiled));
            if (!(e.theory() == c.theory))
                throw TheoryMismatch(def.compiled.string() + " uses theory " + e.theory().describe());
            pairs = e.pairs();
            break;
        }
        }
        for (auto& p : pairs) {
            out.expression.add(std::move(p.prefix), std::move(p.window));
            out.aggregates.push_back(def.aggregate);
            out.definition.push_back(d);
        }
    }
    return out;
}

inline InputSpecifier specifier_from_config(const PipelineConfig& c) {
    const Json& s = c.specifier;
    try {
        if (s.is_string() && s.get<std::string>() == "universal") return universal_specifier(c.theory);
        if (s.is_object() && s.contains("avoid"))
            return avoid_specifier(parse_sre(s.at("avoid").get<std::string>(), c.theory), c.limits);
        if (s.is_object() && s.contains("automaton")) {
            Ksla a = ksla_from_json(s.at("automaton"));
            if (!(a.theory() == c.theory)) throw TheoryMismatch("specifier automaton uses theory " + a.theory().describe());
            return make_input_specifier(a, c.limits);
        }
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("specifier: ") + e.what());
    }
    throw PreconditionError("specifier must be \"universal\", {\"avoid\": SRE} or {\"automaton\": ...}");
}

} // namespace winex::app

#endif // WINEX_APP_CONFIG_HPP
