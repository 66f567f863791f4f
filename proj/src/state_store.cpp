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

#include "acacd/state_store.hpp"

#include "acacd/errors.hpp"

namespace acacd {

StateStore::StateStore(const PolicyBundle& bundle, TraceLog& trace) : bundle_(bundle), trace_(trace)
{
    reset();
}

void StateStore::reset()
{
    std::lock_guard lock(mutex_);
    slots_.clear();
    for (const auto& name : bundle_.activity_names()) {
        const auto& info = bundle_.activity(name);
        slots_.emplace(name, Slot{info.initial_state, info.is_mutable, {}});
    }
}

StateStore::Slot& StateStore::slot(std::string_view name)
{
    auto it = slots_.find(name);
    if (it == slots_.end()) {
        throw UnknownActivity(std::string(name));
    }
    return it->second;
}

const StateStore::Slot& StateStore::slot(std::string_view name) const
{
    auto it = slots_.find(name);
    if (it == slots_.end()) {
        throw UnknownActivity(std::string(name));
    }
    return it->second;
}

void StateStore::emit(const TraceContext& ctx, TraceKind kind, const std::string& name, ActivityState from,
                      ActivityState to) const
{
    trace_.append(TraceEvent{ctx.pass, ctx.phase, kind, name, from, to});
}

ActivityState StateStore::state(std::string_view name) const
{
    std::lock_guard lock(mutex_);
    return slot(name).state;
}

std::optional<ActivityState> StateStore::try_observe(std::string_view name, const std::string& owner,
                                                     const TraceContext* ctx) const
{
    std::lock_guard lock(mutex_);
    const auto& s = slot(name);
    if (!s.owner.empty() && s.owner != owner) {
        return std::nullopt;
    }
    if (ctx) {
        emit(*ctx, TraceKind::check, std::string(name), s.state, s.state);
    }
    return s.state;
}

StateStore::Advance StateStore::try_advance(std::string_view name, ActivityState target, const TraceContext& ctx)
{
    std::lock_guard lock(mutex_);
    auto& s = slot(name);
    if (s.state == target) {
        return Advance::unchanged;
    }
    if (!s.owner.empty() && s.owner != ctx.pass) {
        return Advance::blocked;
    }
    if (!s.is_mutable) {
        throw ImmutableActivity(std::string(name));
    }
    for (auto hop : transition_path(s.state, target)) {
        emit(ctx, TraceKind::update, std::string(name), s.state, hop);
        s.state = hop;
    }
    return Advance::changed;
}

bool StateStore::try_transition(std::string_view name, ActivityState from, ActivityState to,
                                const TraceContext& ctx)
{
    std::lock_guard lock(mutex_);
    auto& s = slot(name);
    if (s.state != from || (!s.owner.empty() && s.owner != ctx.pass)) {
        return false;
    }
    if (from == to) {
        return true;
    }
    ActivityRecord record;
    record.id = std::string(name);
    record.current_state = s.state;
    record.is_mutable = s.is_mutable;
    s.state = apply_transition(record, to).current_state;
    emit(ctx, TraceKind::update, std::string(name), from, to);
    return true;
}

bool StateStore::transition_if(std::string_view name, ActivityState from, ActivityState to,
                               const std::vector<DependencySpec>& conditions, const TraceContext& ctx,
                               StateSnapshot* seen)
{
    std::lock_guard lock(mutex_);
    auto& s = slot(name);
    if (s.state != from || (!s.owner.empty() && s.owner != ctx.pass)) {
        return false;
    }
    StateSnapshot frozen;
    for (const auto& spec : conditions) {
        auto current = slot(spec.activity).state;
        if (current != spec.desired_state) {
            return false;
        }
        frozen[spec.activity] = current;
    }
    ActivityRecord record;
    record.id = std::string(name);
    record.current_state = s.state;
    record.is_mutable = s.is_mutable;
    s.state = apply_transition(record, to).current_state;
    emit(ctx, TraceKind::update, std::string(name), from, to);
    if (seen) {
        *seen = std::move(frozen);
    }
    return true;
}

bool StateStore::try_acquire(std::string_view name, const TraceContext& ctx)
{
    std::lock_guard lock(mutex_);
    auto& s = slot(name);
    if (s.owner == ctx.pass) {
        return true;
    }
    if (!s.owner.empty()) {
        return false;
    }
    s.owner = ctx.pass;
    emit(ctx, TraceKind::lock, std::string(name), s.state, s.state);
    return true;
}

void StateStore::release(std::string_view name, const TraceContext& ctx)
{
    std::lock_guard lock(mutex_);
    auto& s = slot(name);
    if (s.owner != ctx.pass) {
        return;
    }
    s.owner.clear();
    emit(ctx, TraceKind::unlock, std::string(name), s.state, s.state);
}

std::optional<std::string> StateStore::lock_owner(std::string_view name) const
{
    std::lock_guard lock(mutex_);
    const auto& s = slot(name);
    if (s.owner.empty()) {
        return std::nullopt;
    }
    return s.owner;
}

void StateStore::note_wait(std::string_view name, const TraceContext& ctx) const
{
    std::lock_guard lock(mutex_);
    const auto& s = slot(name);
    emit(ctx, TraceKind::wait, std::string(name), s.state, s.state);
}

bool StateStore::locked_by_other(std::string_view name, const std::string& owner) const
{
    std::lock_guard lock(mutex_);
    const auto& s = slot(name);
    return !s.owner.empty() && s.owner != owner;
}

ActivityRecord StateStore::record(std::string_view name) const
{
    std::lock_guard lock(mutex_);
    const auto& s = slot(name);
    ActivityRecord r;
    r.id = std::string(name);
    r.current_state = s.state;
    r.is_mutable = s.is_mutable;
    r.semaphore = s.owner.empty() ? 1 : 0;
    return r;
}

StateSnapshot StateStore::snapshot() const
{
    std::lock_guard lock(mutex_);
    StateSnapshot out;
    for (const auto& [name, s] : slots_) {
        out.emplace(name, s.state);
    }
    return out;
}

} // namespace acacd
