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

#include "acacd/bench.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace acacd {

BenchReport run_bench(const PolicyBundle& bundle, const std::vector<std::size_t>& batches, bool reset_state,
                      EngineConfig config)
{
    BenchReport report;
    const auto& requests = bundle.requests();
    Engine engine(bundle, config);
    for (auto count : batches) {
        BenchRow row;
        row.request_count = count;
        for (std::size_t i = 0; i < count && !requests.empty(); ++i) {
            if (reset_state) {
                engine.store().reset();
            }
            engine.trace().clear();
            auto d = engine.run_lifecycle(requests[i % requests.size()]);
            for (std::size_t p = 0; p < row.phases.size(); ++p) {
                row.phases[p] += d.phases[p];
            }
        }
        report.rows.push_back(row);
    }
    return report;
}

std::string format_table(const BenchReport& report)
{
    std::ostringstream out;
    out << std::left << std::setw(10) << "requests";
    for (auto phase : kAllPhases) {
        auto name = std::string(to_string(phase));
        out << std::right << std::setw(13) << (name + ".ndc") << std::setw(13) << (name + ".ndu")
            << std::setw(13) << (name + ".ms");
    }
    out << '\n';
    for (const auto& row : report.rows) {
        out << std::left << std::setw(10) << row.request_count << std::right;
        for (auto phase : kAllPhases) {
            const auto& c = row.counters(phase);
            out << std::setw(13) << c.ndc << std::setw(13) << c.ndu << std::setw(13) << std::fixed
                << std::setprecision(3) << c.elapsed_ms;
        }
        out << '\n';
    }
    return out.str();
}

std::vector<std::string> to_json_lines(const BenchReport& report, bool with_timing)
{
    std::vector<std::string> lines;
    for (const auto& row : report.rows) {
        nlohmann::ordered_json j;
        j["requests"] = row.request_count;
        for (auto phase : kAllPhases) {
            const auto& c = row.counters(phase);
            nlohmann::ordered_json p;
            p["ndc"] = c.ndc;
            p["ndu"] = c.ndu;
            if (with_timing) {
                p["elapsed_ms"] = c.elapsed_ms;
            }
            j[std::string(to_string(phase))] = std::move(p);
        }
        lines.push_back(j.dump());
    }
    return lines;
}

} // namespace acacd
