// Copyright 2026 The acacd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "acacd/serialize.hpp"

#include <sstream>

#include <json.hpp>

namespace acacd {

namespace {

using Json = nlohmann::ordered_json;

Json phase_json(const PhaseCounters& c, bool with_timing)
{
    Json j;
    j["ndc"] = c.ndc;
    j["ndu"] = c.ndu;
    if (with_timing) {
        j["elapsed_ms"] = c.elapsed_ms;
    }
    return j;
}

Json states_json(const std::vector<ActivityState>& states)
{
    Json j = Json::array();
    for (auto s : states) {
        j.push_back(std::string(to_string(s)));
    }
    return j;
}

} // namespace

std::string to_json_line(const Decision& d, bool with_timing)
{
    Json j;
    j["pass"] = d.pass_id;
    j["verdict"] = std::string(to_string(d.verdict));
    Json history = Json::array();
    for (auto v : d.history) {
        history.push_back(std::string(to_string(v)));
    }
    j["history"] = std::move(history);
    j["source"] = d.request.source.value();
    j["activity"] = d.request.activity;
    j["object"] = d.object.value();
    j["operation"] = d.operation.value();
    j["final_state"] = d.final_state ? Json(std::string(to_string(*d.final_state))) : Json(nullptr);
    j["reason"] = d.reason;
    Json phases;
    for (auto phase : kAllPhases) {
        phases[std::string(to_string(phase))] = phase_json(d.counters(phase), with_timing);
    }
    j["phases"] = std::move(phases);
    return j.dump();
}

std::string to_json_line(const ValidationReport& report)
{
    Json j;
    j["clean"] = report.clean();
    Json cycles = Json::array();
    for (const auto& c : report.cycles) {
        cycles.push_back(c);
    }
    j["cycles"] = std::move(cycles);
    Json conflicts = Json::array();
    for (const auto& w : report.conflicts) {
        Json c;
        c["root"] = w.root;
        c["phase"] = std::string(to_string(w.phase));
        c["activity"] = w.activity;
        c["demanded"] = states_json(w.demanded);
        c["kind"] = std::string(to_string(w.kind));
        conflicts.push_back(std::move(c));
    }
    j["conflicts"] = std::move(conflicts);
    return j.dump();
}

std::string format_report(const ValidationReport& report)
{
    std::ostringstream out;
    if (report.cycles.empty()) {
        out << "cycles: none\n";
    }
    for (const auto& cycle : report.cycles) {
        out << "cycle: [";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            out << (i ? ", " : "") << cycle[i];
        }
        out << "]\n";
    }
    if (report.conflicts.empty()) {
        out << "conflicts: none\n";
    }
    for (const auto& w : report.conflicts) {
        out << to_string(w.kind) << " conflict: " << w.activity << " demanded {";
        for (std::size_t i = 0; i < w.demanded.size(); ++i) {
            out << (i ? ", " : "") << to_string(w.demanded[i]);
        }
        out << "} under " << w.root << " (" << to_string(w.phase) << ")\n";
    }
    out << (report.clean() ? "policy is clean\n" : "policy rejected\n");
    return out.str();
}

} // namespace acacd
