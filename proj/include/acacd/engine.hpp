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

#ifndef ACACD_ENGINE_HPP
#define ACACD_ENGINE_HPP

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acacd/graph.hpp"
#include "acacd/policy.hpp"
#include "acacd/resolver.hpp"
#include "acacd/scheduler.hpp"
#include "acacd/state_store.hpp"
#include "acacd/trace.hpp"

namespace acacd {

/// Which update capabilities are switched on. Checks always run, so turning
/// every update off gives the check-only family members.
struct EngineConfig
{
    bool pre_update = true;
    bool ongoing_update = true;
    bool post_update = true;

    unsigned ongoing_ticks = 1;
    std::chrono::milliseconds tick_interval{1000}; // slept only between ticks
    std::chrono::milliseconds terminal_delay{0};   // before a terminal root returns to inactive
    std::optional<std::chrono::milliseconds> request_deadline;

    std::chrono::milliseconds lock_timeout{30'000};
    std::size_t lock_timeout_steps = 1'000'000;

    bool shuffle_dependencies = false;
    std::uint64_t shuffle_seed = 0;

    /// No sleeping at all; ticks become logical steps.
    bool deterministic = false;
};

enum class Verdict
{
    allowed,
    denied,
    continued,
    revoked,
    completed,
};

std::string_view to_string(Verdict verdict) noexcept;

struct PhaseCounters
{
    std::size_t ndc = 0;
    std::size_t ndu = 0;
    double elapsed_ms = 0.0;

    PhaseCounters& operator+=(const PhaseCounters& other);
};

struct PhaseResult
{
    bool ok = true;
    PhaseCounters counters;
    std::string failure;
};

struct Decision
{
    std::string pass_id;
    Verdict verdict = Verdict::denied;
    std::vector<Verdict> history;
    ActivityRequest request;
    ObjectId object;
    OperationId operation;
    std::optional<ActivityState> final_state;
    std::string reason;
    std::array<PhaseCounters, 3> phases{};
    StateSnapshot allow_snapshot; // pre dependencies as seen when running began

    const PhaseCounters& counters(Phase phase) const { return phases[static_cast<std::size_t>(phase)]; }
};

enum class Schedule
{
    threaded,
    round_robin,
    seeded_random,
};

class Engine
{
public:
    explicit Engine(const PolicyBundle& bundle, EngineConfig config = {});

    const PolicyBundle& bundle() const noexcept { return bundle_; }
    const EngineConfig& config() const noexcept { return config_; }
    StateStore& store() noexcept { return store_; }
    const StateStore& store() const noexcept { return store_; }
    TraceLog& trace() noexcept { return trace_; }
    const ValidationReport& validation() const noexcept { return report_; }
    const DependencyGraph& graph() const noexcept { return graph_; }

    /// Conjunction over the phase's dependencies, counting each one examined.
    PhaseResult phase_check(Phase phase, const ActivityName& act, const ObjectId& obj);

    /// Annotates the chain, then drives every unsatisfied dependency to its
    /// desired state. Failures come back as ok = false with the reason.
    PhaseResult phase_update(Phase phase, const ActivityName& act, const ObjectId& obj);

    /// Runs one request through its whole life cycle on the calling thread.
    Decision run_lifecycle(const ActivityRequest& request);

    /// Runs the requests side by side. Decisions come back in request order.
    std::vector<Decision> run_concurrent(const std::vector<ActivityRequest>& requests, Schedule schedule,
                                         std::uint64_t seed = 0);

    /// Revokes a running activity. Throws IllegalTransition otherwise.
    void stopped(const ActivityName& act, const ObjectId& obj);

    /// Manual hold and resume of a running activity.
    void hold(const ActivityName& act);
    void resume(const ActivityName& act);

    /// Restores initial states and clears the trace.
    void reset();

private:
    Decision run_lifecycle(const ActivityRequest& request, ExecutionGate& gate, const std::string& pass_id);
    PhaseResult check_phase(ResolutionPass& pass, Phase phase, const ActivityName& act, const ObjectId& obj);
    PhaseResult update_phase(ResolutionPass& pass, Phase phase, const ActivityName& act, const ObjectId& obj);
    std::string next_pass_id();
    ResolutionPass::Options pass_options(const std::string& pass_id) const;
    TraceContext lifecycle_context(const std::string& pass_id) const;

    void claim_root(const ActivityName& root, ExecutionGate& gate);
    void release_root(const ActivityName& root);

    const PolicyBundle& bundle_;
    EngineConfig config_;
    TraceLog trace_;
    StateStore store_;
    DependencyGraph graph_;
    ValidationReport report_;

    std::atomic<std::uint64_t> pass_counter_{0};
    std::mutex in_flight_mutex_;
    std::set<ActivityName> in_flight_;
};

} // namespace acacd

#endif // ACACD_ENGINE_HPP
