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

#ifndef ACACD_ACTIVITY_HPP
#define ACACD_ACTIVITY_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>

#include "acacd/state.hpp"

namespace acacd {

using ActivityName = std::string;

/// String identifier distinguished by a tag type so sources, objects and
/// operations cannot be mixed up.
template <typename Tag>
class Identifier
{
public:
    Identifier() = default;
    explicit Identifier(std::string value) : value_(std::move(value)) {}

    const std::string& value() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const Identifier&, const Identifier&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Identifier& id) { return os << id.value_; }

private:
    std::string value_;
};

struct SourceTag;
struct ObjectTag;
struct OperationTag;

using SourceId = Identifier<SourceTag>;
using ObjectId = Identifier<ObjectTag>;
using OperationId = Identifier<OperationTag>;

struct ActivityRequest
{
    SourceId source;
    ActivityName activity;

    friend bool operator==(const ActivityRequest&, const ActivityRequest&) = default;
};

/// One activity's live record. The conflict bookkeeping fields are only
/// meaningful inside a resolution pass; the state store keeps them empty.
struct ActivityRecord
{
    ActivityName id;
    ActivityState current_state = ActivityState::inactive;
    bool is_mutable = true;
    std::uint8_t semaphore = 1; // 1 unlocked, 0 locked
    std::optional<ActivityState> assigned_desired_state;
    bool has_conflicting_desired_state = false;
};

/// Moves `record` to `to` over a single life-cycle edge.
///
/// Throws ImmutableActivity when the record is immutable and `to` differs from
/// the current state, IllegalTransition when the edge does not exist.
/// Self-transitions are no-ops.
ActivityRecord apply_transition(ActivityRecord record, ActivityState to);

} // namespace acacd

template <typename Tag>
struct std::hash<acacd::Identifier<Tag>>
{
    std::size_t operator()(const acacd::Identifier<Tag>& id) const noexcept
    {
        return std::hash<std::string>{}(id.value());
    }
};

#endif // ACACD_ACTIVITY_HPP
