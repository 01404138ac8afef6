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

#ifndef WINEX_KSLA_JSON_HPP
#define WINEX_KSLA_JSON_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "winex/error.hpp"
#include "winex/ksla.hpp"
#include "winex/ksla_ops.hpp"
#include "winex/predicate_text.hpp"

namespace winex {

using Json = nlohmann::ordered_json;

inline Json theory_to_json(const Theory& t) {
    Json j;
    switch (t.kind()) {
    case TheoryKind::Finite:
        j["kind"] = "finite";
        j["alphabet"] = t.alphabet();
        break;
    case TheoryKind::DenseOrder: j["kind"] = "dense"; break;
    case TheoryKind::Custom:
        j["kind"] = "custom";
        j["name"] = t.name();
        break;
    }
    if (t.tracks()) j["tracks"] = t.tracks();
    return j;
}

inline Theory theory_from_json(const Json& j, std::size_t k) {
    if (!j.is_object() || !j.contains("kind")) throw PreconditionError("theory needs a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    Theory t = Theory::dense(k);
    if (kind == "finite") {
        t = Theory::finite(j.at("alphabet").get<std::vector<std::string>>(), k);
    } else if (kind == "custom") {
        t = Theory::custom(j.value("name", std::string("custom")), k);
    } else if (kind != "dense") {
        throw PreconditionError("unknown theory kind '" + kind + "'");
    }
    if (j.contains("tracks")) t = t.with_tracks(j.at("tracks").get<unsigned>());
    return t;
}

/// Renumbers states in breadth-first order from the initial state, visiting out-edges
/// sorted by guard text; unreachable states follow in their original order.
inline Ksla canonical(const Ksla& a) {
    std::vector<StateId> order;
    std::vector<bool> seen(a.size(), false);
    auto visit = [&](StateId root) {
        std::deque<StateId> queue{root};
        seen[root] = true;
        while (!queue.empty()) {
            StateId q = queue.front();
            queue.pop_front();
            order.push_back(q);
            std::vector<std::pair<std::string, StateId>> edges;
            for (const auto& e : a.out(q)) edges.emplace_back(to_text(e.guard), e.to);
            std::sort(edges.begin(), edges.end());
            for (const auto& [g, to] : edges)
                if (!seen[to]) {
                    seen[to] = true;
                    queue.push_back(to);
                }
        }
    };
    if (a.size()) visit(a.initial());
    for (StateId q = 0; q < a.size(); ++q)
        if (!seen[q]) visit(q);
    std::vector<StateId> rank(a.size());
    for (StateId i = 0; i < order.size(); ++i) rank[order[i]] = i;
    Ksla c(a.theory());
    for (StateId i = 0; i < order.size(); ++i) c.add_state(a.is_final(order[i]));
    for (StateId i = 0; i < order.size(); ++i) {
        std::vector<std::pair<StateId, Predicate>> edges;
        for (const auto& e : a.out(order[i])) edges.emplace_back(rank[e.to], e.guard);
        std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [to, g] : edges) c.add_edge(i, to, g);
    }
    if (a.size()) c.set_initial(0);
    c.mark_deterministic(a.deterministic());
    return c;
}

inline Json to_json(const Ksla& input) {
    Ksla a = canonical(input);
    auto name = [](StateId q) { return "q" + std::to_string(q); };
    Json j;
    j["theory"] = theory_to_json(a.theory());
    j["k"] = a.lookback();
    Json states = Json::array();
    for (StateId q = 0; q < a.size(); ++q) states.push_back(name(q));
    j["states"] = states;
    j["initial"] = name(a.initial());
    Json finals = Json::array();
    for (StateId q : a.finals()) finals.push_back(name(q));
    j["finals"] = finals;
    j["deterministic"] = a.deterministic();
    Json trans = Json::array();
    for (StateId q = 0; q < a.size(); ++q)
        for (const auto& e : a.out(q))
            trans.push_back(Json{{"from", name(q)}, {"to", name(e.to)}, {"guard", to_text(e.guard)}});
    j["transitions"] = trans;
    return j;
}

inline std::string serialize(const Ksla& a) { return to_json(a).dump(); }

/// Loads an automaton. Determinism is re-certified when the theory can decide
/// satisfiability; otherwise the stored flag is trusted.
inline Ksla ksla_from_json(const Json& j) {
    try {
        const std::size_t k = j.at("k").get<std::size_t>();
        Theory t = theory_from_json(j.at("theory"), k);
        Ksla a(t);
        std::map<std::string, StateId> ids;
        for (const auto& s : j.at("states")) {
            std::string n = s.get<std::string>();
            if (ids.count(n)) throw PreconditionError("duplicate state '" + n + "'");
            ids[n] = a.add_state();
            a.set_name(ids[n], n);
        }
        auto lookup = [&](const Json& v) {
            auto it = ids.find(v.get<std::string>());
            if (it == ids.end()) throw PreconditionError("unknown state '" + v.get<std::string>() + "'");
            return it->second;
        };
        if (a.size() == 0) throw PreconditionError("automaton has no states");
        a.set_initial(lookup(j.at("initial")));
        for (const auto& f : j.at("finals")) a.set_final(lookup(f));
        for (const auto& tr : j.at("transitions"))
            a.add_edge(lookup(tr.at("from")), lookup(tr.at("to")), parse_predicate(tr.at("guard").get<std::string>()));
        if (t.can_decide_sat()) a.mark_deterministic(certify_deterministic(a));
        else a.mark_deterministic(j.value("deterministic", false));
        return a;
    } catch (const nlohmann::json::exception& e) {
        throw PreconditionError(std::string("malformed automaton JSON: ") + e.what());
    }
}

} // namespace winex

#endif // WINEX_KSLA_JSON_HPP
