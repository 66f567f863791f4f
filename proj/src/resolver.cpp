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

#include "acacd/resolver.hpp"

#include <algorithm>

#include "acacd/errors.hpp"

namespace acacd {

namespace {

std::string describe(const TransitionDependencyKey& key)
{
    return key.activity + " " + std::string(to_string(key.current)) + "->" + std::string(to_string(key.desired));
}

} // namespace

// Tracks the (activity, current, desired) triples on the recursion stack.
// Re-entering one means the chain loops back on itself.
class ResolutionPass::StackGuard
{
public:
    StackGuard(ResolutionPass& pass, TransitionDependencyKey key) : pass_(pass), key_(std::move(key))
    {
        if (pass_.on_stack_.size() >= pass_.depth_cap_) {
            throw CycleDetected("dependency chain deeper than the activity count at " + describe(key_));
        }
        if (!pass_.on_stack_.insert(key_).second) {
            throw CycleDetected("dependency chain revisits " + describe(key_));
        }
    }

    ~StackGuard() { pass_.on_stack_.erase(key_); }

    StackGuard(const StackGuard&) = delete;
    StackGuard& operator=(const StackGuard&) = delete;

private:
    ResolutionPass& pass_;
    TransitionDependencyKey key_;
};

ResolutionPass::ResolutionPass(const PolicyBundle& bundle, StateStore& store, ExecutionGate& gate,
                               std::string pass_id, Options options)
    : bundle_(bundle), store_(store), gate_(gate), ctx_{std::move(pass_id), {}}, options_(options),
      rng_(options.seed), depth_cap_(std::max<std::size_t>(1, bundle.activity_names().size()))
{
}

void ResolutionPass::begin(std::string phase)
{
    ctx_.phase = std::move(phase);
    books_.clear();
    on_stack_.clear();
    ndc_ = 0;
    ndu_ = 0;
}

std::vector<DependencySpec> ResolutionPass::ordered(const std::vector<DependencySpec>& list)
{
    std::vector<DependencySpec> out(list);
    if (options_.shuffle) {
        std::shuffle(out.begin(), out.end(), rng_);
    }
    return out;
}

void ResolutionPass::detect_conflicting_desired_state(const ActivityName& da, ActivityState desired)
{
    auto& book = books_[da];
    if (!book.assigned) {
        book.assigned = desired;
        book.conflict = false;
    } else if (desired != *book.assigned) {
        book.conflict = true;
    }
}

void ResolutionPass::recursive_check_with_conflict_detection(const ActivityName& da, ActivityState current,
                                                             ActivityState desired)
{
    StackGuard guard(*this, TransitionDependencyKey{da, current, desired});
    detect_conflicting_desired_state(da, desired);
    for (const auto& doda : bundle_.get_doda({da, current, desired})) {
        recursive_check_with_conflict_detection(doda.activity, store_.state(doda.activity), doda.desired_state);
    }
}

ActivityState ResolutionPass::recursive_update(const ActivityName& da, ActivityState current,
                                               ActivityState desired)
{
    TransitionDependencyKey key{da, current, desired};
    StackGuard guard(*this, key);
    const auto& dodas = bundle_.get_doda(key);
    if (dodas.empty()) {
        return desired;
    }
    for (const auto& doda : ordered(dodas)) {
        gate_.step();
        if (store_.state(da) == desired) {
            return desired;
        }
        count_check();
        auto doda_current = observe(doda.activity);
        if (doda_current == doda.desired_state) {
            continue;
        }
        if (has_conflicting_desired_state(doda.activity)) {
            acquire_lock(da, current, desired, doda.activity);
            if (store_.state(da) == desired) {
                return desired;
            }
            doda_current = observe(doda.activity);
            if (doda_current == doda.desired_state) {
                continue;
            }
        }
        recursive_update(doda.activity, doda_current, doda.desired_state);
        commit(doda.activity, doda.desired_state);
    }
    return desired;
}

void ResolutionPass::acquire_lock(const ActivityName& parent, ActivityState /*parent_current*/,
                                  ActivityState /*parent_desired*/, const ActivityName& doda)
{
    bool fresh = !held_.contains(doda);
    while (!store_.try_acquire(doda, ctx_)) {
        store_.note_wait(doda, ctx_);
        gate_.await(doda, [&] { return !store_.locked_by_other(doda, ctx_.pass); });
    }
    if (fresh) {
        held_.insert(doda);
        locks_for_[parent].push_back(doda);
    }
}

void ResolutionPass::release_lock(const ActivityName& doda)
{
    if (held_.erase(doda) > 0) {
        store_.release(doda, ctx_);
    }
}

void ResolutionPass::commit(const ActivityName& da, ActivityState desired)
{
    for (;;) {
        gate_.step();
        auto result = store_.try_advance(da, desired, ctx_);
        if (result == StateStore::Advance::blocked) {
            store_.note_wait(da, ctx_);
            gate_.await(da, [&] { return !store_.locked_by_other(da, ctx_.pass); });
            continue;
        }
        if (result == StateStore::Advance::changed) {
            ++ndu_;
        }
        break;
    }
    auto it = locks_for_.find(da);
    if (it != locks_for_.end()) {
        auto locks = std::move(it->second);
        locks_for_.erase(it);
        for (const auto& doda : locks) {
            release_lock(doda);
        }
    }
}

void ResolutionPass::release_all()
{
    auto held = held_;
    for (const auto& name : held) {
        release_lock(name);
    }
    locks_for_.clear();
}

ActivityState ResolutionPass::observe(const ActivityName& name)
{
    for (;;) {
        if (auto s = store_.try_observe(name, ctx_.pass, &ctx_)) {
            return *s;
        }
        store_.note_wait(name, ctx_);
        gate_.await(name, [&] { return !store_.locked_by_other(name, ctx_.pass); });
    }
}

ActivityRecord ResolutionPass::view(const ActivityName& name) const
{
    auto record = store_.record(name);
    auto it = books_.find(name);
    if (it != books_.end()) {
        record.assigned_desired_state = it->second.assigned;
        record.has_conflicting_desired_state = it->second.conflict;
    }
    return record;
}

std::optional<ActivityState> ResolutionPass::assigned_desired_state(const ActivityName& name) const
{
    auto it = books_.find(name);
    return it == books_.end() ? std::nullopt : it->second.assigned;
}

bool ResolutionPass::has_conflicting_desired_state(const ActivityName& name) const
{
    auto it = books_.find(name);
    return it != books_.end() && it->second.conflict;
}

} // namespace acacd
