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

#ifndef ACACD_TRACE_HPP
#define ACACD_TRACE_HPP

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "acacd/activity.hpp"
#include "acacd/state.hpp"

namespace acacd {

enum class TraceKind : std::uint8_t
{
    check,
    update,
    lock,
    wait,
    unlock,
};

std::string_view to_string(TraceKind kind) noexcept;

/// Pass and phase labels attached to every event a pass emits.
struct TraceContext
{
    std::string pass;
    std::string phase;
};

struct TraceEvent
{
    std::string pass;
    std::string phase;
    TraceKind kind = TraceKind::check;
    ActivityName activity;
    ActivityState from = ActivityState::inactive;
    ActivityState to = ActivityState::inactive;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

/// Append-only event log shared by all passes of one engine.
class TraceLog
{
public:
    void append(TraceEvent event);
    std::vector<TraceEvent> events() const;
    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::vector<TraceEvent> events_;
};

/// One JSON object per line, keys in a fixed order.
std::string to_json_line(const TraceEvent& event);

} // namespace acacd

#endif // ACACD_TRACE_HPP
