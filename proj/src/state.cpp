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

#include "acacd/state.hpp"

#include <deque>
#include <optional>
#include <string>

#include "acacd/errors.hpp"

namespace acacd {

namespace {

constexpr std::size_t index_of(ActivityState s) noexcept
{
    return static_cast<std::size_t>(s);
}

} // namespace

std::string_view to_string(ActivityState state) noexcept
{
    switch (state) {
    case ActivityState::inactive: return "inactive";
    case ActivityState::dormant: return "dormant";
    case ActivityState::aborted: return "aborted";
    case ActivityState::running: return "running";
    case ActivityState::hold: return "hold";
    case ActivityState::revoked: return "revoked";
    case ActivityState::finished: return "finished";
    }
    return "?";
}

ActivityState parse_state(std::string_view token)
{
    for (auto s : kAllStates) {
        if (to_string(s) == token) {
            return s;
        }
    }
    throw UnknownState(std::string(token));
}

std::ostream& operator<<(std::ostream& os, ActivityState state)
{
    return os << to_string(state);
}

std::vector<ActivityState> successors(ActivityState from)
{
    using S = ActivityState;
    switch (from) {
    case S::inactive: return {S::dormant};
    case S::dormant: return {S::running, S::aborted};
    case S::running: return {S::finished, S::revoked, S::hold};
    case S::hold: return {S::running, S::finished, S::revoked};
    case S::finished:
    case S::revoked:
    case S::aborted: return {S::inactive};
    }
    return {};
}

bool valid_transition(ActivityState from, ActivityState to) noexcept
{
    if (from == to) {
        return true;
    }
    for (auto next : successors(from)) {
        if (next == to) {
            return true;
        }
    }
    return false;
}

std::vector<ActivityState> transition_path(ActivityState from, ActivityState to)
{
    if (from == to) {
        return {};
    }
    std::array<std::optional<ActivityState>, kAllStates.size()> parent{};
    std::array<bool, kAllStates.size()> seen{};
    std::deque<ActivityState> frontier{from};
    seen[index_of(from)] = true;
    while (!frontier.empty()) {
        auto cur = frontier.front();
        frontier.pop_front();
        if (cur == to) {
            break;
        }
        for (auto next : successors(cur)) {
            if (!seen[index_of(next)]) {
                seen[index_of(next)] = true;
                parent[index_of(next)] = cur;
                frontier.push_back(next);
            }
        }
    }
    std::vector<ActivityState> path;
    for (auto at = to; at != from; at = *parent[index_of(at)]) {
        path.insert(path.begin(), at);
    }
    return path;
}

} // namespace acacd
