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

#ifndef ACACD_RESOLVER_HPP
#define ACACD_RESOLVER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "acacd/activity.hpp"
#include "acacd/policy.hpp"
#include "acacd/scheduler.hpp"
#include "acacd/state_store.hpp"

namespace acacd {

/// One resolution of one phase's dependencies on behalf of one request.
///
/// Conflict bookkeeping and counters live here and start empty with every
/// begin(); live states and semaphores live in the shared StateStore.
class ResolutionPass
{
public:
    struct Options
    {
        bool shuffle = false;
        std::uint64_t seed = 0;
    };

    ResolutionPass(const PolicyBundle& bundle, StateStore& store, ExecutionGate& gate, std::string pass_id,
                   Options options);
    ResolutionPass(const PolicyBundle& bundle, StateStore& store, ExecutionGate& gate, std::string pass_id)
        : ResolutionPass(bundle, store, gate, std::move(pass_id), Options{})
    {
    }

    ResolutionPass(const ResolutionPass&) = delete;
    ResolutionPass& operator=(const ResolutionPass&) = delete;

    const std::string& id() const noexcept { return ctx_.pass; }
    const TraceContext& context() const noexcept { return ctx_; }
    ExecutionGate& gate() noexcept { return gate_; }

    /// Clears bookkeeping and counters and labels subsequent events.
    void begin(std::string phase);

    void detect_conflicting_desired_state(const ActivityName& da, ActivityState desired);
    void recursive_check_with_conflict_detection(const ActivityName& da, ActivityState current,
                                                 ActivityState desired);

    /// Brings every dependency of the transition current -> desired of `da`
    /// to its mapped state, deepest first, and returns `desired`. The caller
    /// applies the returned state with commit().
    ActivityState recursive_update(const ActivityName& da, ActivityState current, ActivityState desired);

    void acquire_lock(const ActivityName& parent, ActivityState parent_current, ActivityState parent_desired,
                      const ActivityName& doda);
    void release_lock(const ActivityName& doda);

    /// Moves `da` to `desired`, then releases the locks taken on its behalf.
    void commit(const ActivityName& da, ActivityState desired);
    void release_all();

    /// Current state of `name`, waiting while another pass holds its lock.
    /// Logs a check event; does not touch the counters.
    ActivityState observe(const ActivityName& name);

    /// Store record merged with this pass's bookkeeping.
    ActivityRecord view(const ActivityName& name) const;

    std::optional<ActivityState> assigned_desired_state(const ActivityName& name) const;
    bool has_conflicting_desired_state(const ActivityName& name) const;

    void count_check() noexcept { ++ndc_; }
    std::size_t ndc() const noexcept { return ndc_; }
    std::size_t ndu() const noexcept { return ndu_; }
    const std::set<ActivityName>& held_locks() const noexcept { return held_; }

    /// `list` in file order, or permuted when shuffling is on.
    std::vector<DependencySpec> ordered(const std::vector<DependencySpec>& list);

private:
    struct Bookkeeping
    {
        std::optional<ActivityState> assigned;
        bool conflict = false;
    };

    class StackGuard;

    const PolicyBundle& bundle_;
    StateStore& store_;
    ExecutionGate& gate_;
    TraceContext ctx_;
    Options options_;
    std::mt19937_64 rng_;
    std::size_t depth_cap_;

    std::map<ActivityName, Bookkeeping> books_;
    std::set<TransitionDependencyKey> on_stack_;
    std::set<ActivityName> held_;
    std::map<ActivityName, std::vector<ActivityName>> locks_for_;
    std::size_t ndc_ = 0;
    std::size_t ndu_ = 0;
};

} // namespace acacd

#endif // ACACD_RESOLVER_HPP
