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

#include "acacd/activity.hpp"

#include "acacd/errors.hpp"

namespace acacd {

ActivityRecord apply_transition(ActivityRecord record, ActivityState to)
{
    if (record.current_state == to) {
        return record;
    }
    if (!record.is_mutable) {
        throw ImmutableActivity(record.id);
    }
    if (!valid_transition(record.current_state, to)) {
        throw IllegalTransition(record.id, std::string(to_string(record.current_state)),
                                std::string(to_string(to)));
    }
    record.current_state = to;
    return record;
}

} // namespace acacd
