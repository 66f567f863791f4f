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

#ifndef ACACD_STATE_HPP
#define ACACD_STATE_HPP

#include <array>
#include <cstdint>
#include <ostream>
#include <string_view>
#include <vector>

namespace acacd {

/// Life-cycle state of an activity. Current and desired states share this
/// value space.
enum class ActivityState : std::uint8_t
{
    inactive,
    dormant,
    aborted,
    running,
    hold,
    revoked,
    finished,
};

inline constexpr std::array<ActivityState, 7> kAllStates{
    ActivityState::inactive, ActivityState::dormant, ActivityState::aborted, ActivityState::running,
    ActivityState::hold,     ActivityState::revoked, ActivityState::finished,
};

/// Lowercase wire token for a state.
std::string_view to_string(ActivityState state) noexcept;

/// Parses a wire token. Throws UnknownState for anything but the seven tokens.
ActivityState parse_state(std::string_view token);

std::ostream& operator<<(std::ostream& os, ActivityState state);

/// True for the edges of the activity life-cycle graph and for self-transitions.
///
///   inactive -> dormant
///   dormant  -> running | aborted
///   running  -> hold | finished | revoked
///   hold     -> running | finished | revoked
///   finished | revoked | aborted -> inactive
bool valid_transition(ActivityState from, ActivityState to) noexcept;

/// Legal edges leaving `from`, in the order the resolver prefers them when
/// decomposing a multi-hop change (finished before revoked before hold).
std::vector<ActivityState> successors(ActivityState from);

/// Shortest sequence of legal hops taking `from` to `to`, excluding `from`
/// itself. Empty when from == to. Ties break on successors() order, so
/// running -> inactive decomposes as running -> finished -> inactive.
std::vector<ActivityState> transition_path(ActivityState from, ActivityState to);

/// Terminal states return to inactive on their own once post-processing is done.
constexpr bool is_terminal(ActivityState s) noexcept
{
    return s == ActivityState::finished || s == ActivityState::revoked || s == ActivityState::aborted;
}

} // namespace acacd

#endif // ACACD_STATE_HPP
