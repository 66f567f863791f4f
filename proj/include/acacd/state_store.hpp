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

#ifndef ACACD_STATE_STORE_HPP
#define ACACD_STATE_STORE_HPP

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "acacd/activity.hpp"
#include "acacd/policy.hpp"
#include "acacd/trace.hpp"

namespace acacd {

using StateSnapshot = std::map<ActivityName, ActivityState>;

/// Shared current-state table. Every read and write of a live activity state,
/// and every semaphore operation, goes through here under one mutex, and the
/// matching trace event is appended under the same mutex so the log order is
/// the mutation order.
class StateStore
{
public:
    enum class Advance
    {
        unchanged,
        changed,
        blocked, // locked by another pass
    };

    StateStore(const PolicyBundle& bundle, TraceLog& trace);

    /// Unconditional read. Throws UnknownActivity.
    ActivityState state(std::string_view name) const;

    /// Read on behalf of `owner`; nullopt while another pass holds the lock.
    /// Emits a check event when `ctx` is given.
    std::optional<ActivityState> try_observe(std::string_view name, const std::string& owner,
                                             const TraceContext* ctx = nullptr) const;

    /// Walks `name` to `target` over the shortest legal path in one atomic
    /// step, one update event per hop. Throws ImmutableActivity.
    Advance try_advance(std::string_view name, ActivityState target, const TraceContext& ctx);

    /// Single-edge compare-and-update. Returns false when the current state is
    /// not `from` or another pass holds the lock. Throws IllegalTransition.
    bool try_transition(std::string_view name, ActivityState from, ActivityState to, const TraceContext& ctx);

    /// Moves `name` from `from` to `to` only if every spec holds at this
    /// instant. On success the states seen are copied to `seen`.
    bool transition_if(std::string_view name, ActivityState from, ActivityState to,
                       const std::vector<DependencySpec>& conditions, const TraceContext& ctx,
                       StateSnapshot* seen = nullptr);

    /// Binary semaphore. Re-acquiring a lock already held by `ctx.pass` is a
    /// no-op that returns true.
    bool try_acquire(std::string_view name, const TraceContext& ctx);
    void release(std::string_view name, const TraceContext& ctx);
    std::optional<std::string> lock_owner(std::string_view name) const;
    /// Logs that `ctx.pass` is blocked on `name`.
    void note_wait(std::string_view name, const TraceContext& ctx) const;
    bool locked_by_other(std::string_view name, const std::string& owner) const;

    /// Record view with semaphore filled in and empty conflict bookkeeping.
    ActivityRecord record(std::string_view name) const;
    StateSnapshot snapshot() const;

    /// Restores the initial states and drops every lock.
    void reset();

private:
    struct Slot
    {
        ActivityState state;
        bool is_mutable;
        std::string owner; // empty while unlocked
    };

    Slot& slot(std::string_view name);
    const Slot& slot(std::string_view name) const;
    void emit(const TraceContext& ctx, TraceKind kind, const std::string& name, ActivityState from,
              ActivityState to) const;

    const PolicyBundle& bundle_;
    TraceLog& trace_;
    mutable std::mutex mutex_;
    std::map<ActivityName, Slot, std::less<>> slots_;
};

} // namespace acacd

#endif // ACACD_STATE_STORE_HPP
