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

#include "acacd/trace.hpp"

#include <json.hpp>

namespace acacd {

std::string_view to_string(TraceKind kind) noexcept
{
    switch (kind) {
    case TraceKind::check: return "check";
    case TraceKind::update: return "update";
    case TraceKind::lock: return "lock";
    case TraceKind::wait: return "wait";
    case TraceKind::unlock: return "unlock";
    }
    return "?";
}

void TraceLog::append(TraceEvent event)
{
    std::lock_guard lock(mutex_);
    events_.push_back(std::move(event));
}

std::vector<TraceEvent> TraceLog::events() const
{
    std::lock_guard lock(mutex_);
    return events_;
}

std::size_t TraceLog::size() const
{
    std::lock_guard lock(mutex_);
    return events_.size();
}

void TraceLog::clear()
{
    std::lock_guard lock(mutex_);
    events_.clear();
}

std::string to_json_line(const TraceEvent& event)
{
    nlohmann::ordered_json j;
    j["pass"] = event.pass;
    j["phase"] = event.phase;
    j["event"] = std::string(to_string(event.kind));
    j["activity"] = event.activity;
    j["from"] = std::string(to_string(event.from));
    j["to"] = std::string(to_string(event.to));
    return j.dump();
}

} // namespace acacd
