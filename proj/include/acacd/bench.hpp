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

#ifndef ACACD_BENCH_HPP
#define ACACD_BENCH_HPP

#include <array>
#include <string>
#include <vector>

#include "acacd/engine.hpp"

namespace acacd {

struct BenchRow
{
    std::size_t request_count = 0;
    std::array<PhaseCounters, 3> phases{};

    const PhaseCounters& counters(Phase phase) const { return phases[static_cast<std::size_t>(phase)]; }
};

struct BenchReport
{
    std::vector<BenchRow> rows;
};

/// Replays request.json sequentially: batch n issues n requests, cycling
/// through the file. With `reset_state` every request starts from the
/// initial states; otherwise state carries over across requests and batches.
BenchReport run_bench(const PolicyBundle& bundle, const std::vector<std::size_t>& batches, bool reset_state,
                      EngineConfig config = {});

/// Aligned plain-text table.
std::string format_table(const BenchReport& report);

/// One JSON record per row.
std::vector<std::string> to_json_lines(const BenchReport& report, bool with_timing);

} // namespace acacd

#endif // ACACD_BENCH_HPP
