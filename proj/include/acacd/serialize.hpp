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

#ifndef ACACD_SERIALIZE_HPP
#define ACACD_SERIALIZE_HPP

#include <string>

#include "acacd/engine.hpp"
#include "acacd/graph.hpp"

namespace acacd {

/// One-line JSON record. Timings are left out when `with_timing` is false so
/// deterministic runs print identical bytes.
std::string to_json_line(const Decision& decision, bool with_timing);

/// Cycles and conflict warnings as one JSON object.
std::string to_json_line(const ValidationReport& report);

/// Multi-line human summary of a validation report.
std::string format_report(const ValidationReport& report);

} // namespace acacd

#endif // ACACD_SERIALIZE_HPP
