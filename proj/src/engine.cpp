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

#include "acacd/engine.hpp"

#include <functional>
#include <thread>
#include <typeinfo>

#include "acacd/errors.hpp"

namespace acacd {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kAllowAttempts = 8;

double millis_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::size_t index_of(Phase phase)
{
    return static_cast<std::size_t>(phase);
}

std::string error_kind(const std::exception& e)
{
    if (dynamic_cast<const ImmutableActivity*>(&e)) return "ImmutableActivity";
    if (dynamic_cast<const LockTimeout*>(&e)) return "LockTimeout";
    if (dynamic_cast<const CycleDetected*>(&e)) return "CycleDetected";
    if (dynamic_cast<const PolicyConflict*>(&e)) return "PolicyConflict";
    if (dynamic_cast<const IllegalTransition*>(&e)) return "IllegalTransition";
    if (dynamic_cast<const NoObjectForActivity*>(&e)) return "NoObjectForActivity";
    if (dynamic_cast<const NoOperationForPair*>(&e)) return "NoOperationForPair";
    if (dynamic_cast<const UnknownActivity*>(&e)) return "UnknownActivity";
    return "Error";
}

std::string reason_of(const std::exception& e)
{
    return error_kind(e) + ": " + e.what();
}

// The root moved under us; ends the life cycle where it stands.
struct Preempted
{
    std::string reason;
};

} // namespace

std::string_view to_string(Verdict verdict) noexcept
{
    switch (verdict) {
    case Verdict::allowed: return "allowed";
    case Verdict::denied: return "denied";
    case Verdict::continued: return "continued";
    case Verdict::revoked: return "revoked";
    case Verdict::completed: return "completed";
    }
    return "?";
}

PhaseCounters& PhaseCounters::operator+=(const PhaseCounters& other)
{
    ndc += other.ndc;
    ndu += other.ndu;
    elapsed_ms += other.elapsed_ms;
    return *this;
}

Engine::Engine(const PolicyBundle& bundle, EngineConfig config)
    : bundle_(bundle), config_(config), store_(bundle, trace_), graph_(DependencyGraph::build(bundle)),
      report_(validate(graph_))
{
}

std::string Engine::next_pass_id()
{
    return "req-" + std::to_string(++pass_counter_);
}

ResolutionPass::Options Engine::pass_options(const std::string& pass_id) const
{
    return ResolutionPass::Options{config_.shuffle_dependencies,
                                   config_.shuffle_seed ^ std::hash<std::string>{}(pass_id)};
}

TraceContext Engine::lifecycle_context(const std::string& pass_id) const
{
    return TraceContext{pass_id, "lifecycle"};
}

void Engine::reset()
{
    store_.reset();
    trace_.clear();
}

PhaseResult Engine::check_phase(ResolutionPass& pass, Phase phase, const ActivityName& act, const ObjectId& obj)
{
    auto start = Clock::now();
    pass.begin(std::string(to_string(phase)));
    PhaseResult result;
    try {
        for (const auto& spec : pass.ordered(bundle_.get_da(act, obj, phase))) {
            pass.gate().step();
            pass.count_check();
            if (pass.observe(spec.activity) != spec.desired_state) {
                result.ok = false;
            }
        }
    } catch (const Error& e) {
        pass.release_all();
        result.ok = false;
        result.failure = reason_of(e);
    }
    result.counters.ndc = pass.ndc();
    result.counters.ndu = pass.ndu();
    result.counters.elapsed_ms = millis_since(start);
    return result;
}

PhaseResult Engine::update_phase(ResolutionPass& pass, Phase phase, const ActivityName& act, const ObjectId& obj)
{
    auto start = Clock::now();
    pass.begin(std::string(to_string(phase)));
    PhaseResult result;
    try {
        auto deps = pass.ordered(bundle_.get_da(act, obj, phase));
        for (const auto& spec : deps) {
            pass.recursive_check_with_conflict_detection(spec.activity, store_.state(spec.activity),
                                                         spec.desired_state);
        }
        for (const auto& spec : deps) {
            pass.gate().step();
            auto current = pass.observe(spec.activity);
            if (current == spec.desired_state) {
                continue;
            }
            auto reached = pass.recursive_update(spec.activity, current, spec.desired_state);
            pass.commit(spec.activity, reached);
        }
    } catch (const Error& e) {
        pass.release_all();
        result.ok = false;
        result.failure = reason_of(e);
    }
    result.counters.ndc = pass.ndc();
    result.counters.ndu = pass.ndu();
    result.counters.elapsed_ms = millis_since(start);
    return result;
}

PhaseResult Engine::phase_check(Phase phase, const ActivityName& act, const ObjectId& obj)
{
    InlineGate gate;
    ResolutionPass pass(bundle_, store_, gate, next_pass_id(), pass_options("check"));
    return check_phase(pass, phase, act, obj);
}

PhaseResult Engine::phase_update(Phase phase, const ActivityName& act, const ObjectId& obj)
{
    InlineGate gate;
    ResolutionPass pass(bundle_, store_, gate, next_pass_id(), pass_options("update"));
    return update_phase(pass, phase, act, obj);
}

void Engine::claim_root(const ActivityName& root, ExecutionGate& gate)
{
    for (;;) {
        {
            std::lock_guard lock(in_flight_mutex_);
            if (in_flight_.insert(root).second) {
                return;
            }
        }
        gate.await(root, [&] {
            std::lock_guard lock(in_flight_mutex_);
            return !in_flight_.contains(root);
        });
    }
}

void Engine::release_root(const ActivityName& root)
{
    std::lock_guard lock(in_flight_mutex_);
    in_flight_.erase(root);
}

Decision Engine::run_lifecycle(const ActivityRequest& request)
{
    InlineGate gate;
    return run_lifecycle(request, gate, next_pass_id());
}

Decision Engine::run_lifecycle(const ActivityRequest& request, ExecutionGate& gate, const std::string& pass_id)
{
    Decision d;
    d.pass_id = pass_id;
    d.request = request;
    const auto& root = request.activity;

    auto deny = [&](std::string reason) {
        d.verdict = Verdict::denied;
        d.history.push_back(Verdict::denied);
        d.reason = std::move(reason);
        if (bundle_.has_activity(root)) {
            d.final_state = store_.state(root);
        }
        return d;
    };

    if (!bundle_.has_activity(root)) {
        return deny(reason_of(UnknownActivity(root)));
    }
    if (!bundle_.activity(root).is_mutable) {
        return deny(reason_of(ImmutableActivity(root)));
    }

    claim_root(root, gate);
    struct RootClaim
    {
        Engine& engine;
        const ActivityName& root;
        ~RootClaim() { engine.release_root(root); }
    } claim{*this, root};

    const auto ctx = lifecycle_context(pass_id);
    const auto started = Clock::now();
    const bool realtime = !config_.deterministic && gate.wall_clock();
    auto over_deadline = [&] {
        return config_.request_deadline && Clock::now() - started > *config_.request_deadline;
    };
    auto move = [&](ActivityState from, ActivityState to) {
        for (;;) {
            if (store_.try_transition(root, from, to, ctx)) {
                return;
            }
            if (!store_.locked_by_other(root, pass_id)) {
                throw Preempted{"ActivityPreempted: " + root + " left " + std::string(to_string(from)) +
                                " while its request was in flight"};
            }
            store_.note_wait(root, ctx);
            gate.await(root, [&] { return !store_.locked_by_other(root, pass_id); });
        }
    };

    ResolutionPass pass(bundle_, store_, gate, pass_id, pass_options(pass_id));
    auto& pre = d.phases[index_of(Phase::pre)];
    auto& ongoing = d.phases[index_of(Phase::ongoing)];
    auto& post = d.phases[index_of(Phase::post)];
    bool running = false;
    Verdict on_error = Verdict::denied;

    try {
        auto current = store_.state(root);
        if (current != ActivityState::inactive && !is_terminal(current)) {
            return deny("ActivityBusy: " + root + " is " + std::string(to_string(current)));
        }
        if (is_terminal(current)) {
            move(current, ActivityState::inactive);
        }
        move(ActivityState::inactive, ActivityState::dormant);

        auto abort = [&](std::string reason) {
            move(ActivityState::dormant, ActivityState::aborted);
            return deny(std::move(reason));
        };

        try {
            d.object = bundle_.get_object(root);
            d.operation = bundle_.get_operation(root, d.object);
        } catch (const Error& e) {
            return abort(reason_of(e));
        }
        if (auto refusal = refusal_for(graph_, report_, root)) {
            auto kind = refusal->kind == Refusal::Kind::cycle ? "CycleDetected: " : "PolicyConflict: ";
            return abort(kind + refusal->detail);
        }

        // Pre phase: check, update on failure, then start only if the
        // dependencies still hold at the instant of the transition.
        std::string failure;
        const auto& pre_specs = bundle_.get_da(root, d.object, Phase::pre);
        for (int attempt = 0; attempt < kAllowAttempts && !running; ++attempt) {
            if (over_deadline()) {
                failure = "RequestTimeout: deadline passed before start";
                break;
            }
            auto checked = check_phase(pass, Phase::pre, root, d.object);
            pre += checked.counters;
            if (!checked.ok) {
                if (!checked.failure.empty()) {
                    failure = checked.failure;
                    break;
                }
                if (!config_.pre_update) {
                    failure = "PreDependencyUnmet: pre dependencies of " + root + " not in desired states";
                    break;
                }
                auto updated = update_phase(pass, Phase::pre, root, d.object);
                pre += updated.counters;
                if (!updated.ok) {
                    failure = updated.failure;
                    break;
                }
            }
            running = store_.transition_if(root, ActivityState::dormant, ActivityState::running, pre_specs, ctx,
                                           &d.allow_snapshot);
            if (!running) {
                gate.step();
            }
        }
        if (!running) {
            return abort(failure.empty() ? "PreDependencyDrift: pre dependencies kept changing" : failure);
        }
        d.history.push_back(Verdict::allowed);
        on_error = Verdict::revoked;

        bool revoked = false;
        for (unsigned tick = 0; tick < config_.ongoing_ticks; ++tick) {
            if (tick > 0) {
                gate.step();
                if (realtime) {
                    std::this_thread::sleep_for(config_.tick_interval);
                }
            }
            if (store_.state(root) == ActivityState::hold) {
                gate.await(root, [&] { return store_.state(root) != ActivityState::hold; });
            }
            if (store_.state(root) != ActivityState::running) {
                break;
            }
            std::string stop_reason;
            if (over_deadline()) {
                stop_reason = "RequestTimeout: deadline passed while running";
            } else {
                auto checked = check_phase(pass, Phase::ongoing, root, d.object);
                ongoing += checked.counters;
                if (checked.ok) {
                    d.history.push_back(Verdict::continued);
                    continue;
                }
                if (!checked.failure.empty()) {
                    stop_reason = checked.failure;
                } else if (config_.ongoing_update) {
                    auto updated = update_phase(pass, Phase::ongoing, root, d.object);
                    ongoing += updated.counters;
                    if (updated.ok) {
                        d.history.push_back(Verdict::continued);
                        continue;
                    }
                    stop_reason = updated.failure;
                } else {
                    stop_reason = "OngoingDependencyUnmet: ongoing dependencies of " + root +
                                  " not in desired states";
                }
            }
            move(ActivityState::running, ActivityState::revoked);
            d.reason = stop_reason;
            revoked = true;
            break;
        }

        auto ended = store_.state(root);
        if (!revoked) {
            if (ended == ActivityState::running || ended == ActivityState::hold) {
                move(ended, ActivityState::finished);
                d.history.push_back(Verdict::completed);
            } else if (ended == ActivityState::revoked) {
                revoked = true;
                d.reason = "revoked by control";
            } else if (ended != ActivityState::finished) {
                throw Preempted{"ActivityPreempted: " + root + " reached " + std::string(to_string(ended))};
            } else {
                d.history.push_back(Verdict::completed);
            }
        }
        if (revoked) {
            d.history.push_back(Verdict::revoked);
        }
        on_error = revoked ? Verdict::revoked : Verdict::allowed;

        auto checked = check_phase(pass, Phase::post, root, d.object);
        post += checked.counters;
        if (!checked.ok && config_.post_update && checked.failure.empty()) {
            auto updated = update_phase(pass, Phase::post, root, d.object);
            post += updated.counters;
            if (!updated.ok) {
                d.reason += (d.reason.empty() ? "" : "; ") + std::string("post: ") + updated.failure;
            }
        } else if (!checked.failure.empty()) {
            d.reason += (d.reason.empty() ? "" : "; ") + std::string("post: ") + checked.failure;
        }

        if (realtime && config_.terminal_delay.count() > 0) {
            std::this_thread::sleep_for(config_.terminal_delay);
        }
        move(store_.state(root), ActivityState::inactive);
        d.verdict = revoked ? Verdict::revoked : Verdict::allowed;
    } catch (const Preempted& p) {
        pass.release_all();
        d.verdict = on_error;
        if (d.history.empty() || d.history.back() != on_error) {
            d.history.push_back(on_error);
        }
        d.reason = p.reason;
    } catch (const Error& e) {
        pass.release_all();
        d.verdict = on_error;
        if (d.history.empty() || d.history.back() != on_error) {
            d.history.push_back(on_error);
        }
        d.reason = reason_of(e);
    }
    d.final_state = store_.state(root);
    return d;
}

std::vector<Decision> Engine::run_concurrent(const std::vector<ActivityRequest>& requests, Schedule schedule,
                                             std::uint64_t seed)
{
    std::vector<Decision> out(requests.size());
    std::vector<std::string> ids;
    ids.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        ids.push_back(next_pass_id());
    }

    if (schedule == Schedule::threaded) {
        std::vector<std::thread> threads;
        threads.reserve(requests.size());
        for (std::size_t i = 0; i < requests.size(); ++i) {
            threads.emplace_back([&, i] {
                ThreadedGate gate(config_.lock_timeout);
                out[i] = run_lifecycle(requests[i], gate, ids[i]);
            });
        }
        for (auto& t : threads) {
            t.join();
        }
        return out;
    }

    auto mode = schedule == Schedule::round_robin ? CooperativeScheduler::Mode::round_robin
                                                  : CooperativeScheduler::Mode::seeded_random;
    CooperativeScheduler scheduler(mode, seed, config_.lock_timeout_steps);
    std::vector<CooperativeScheduler::Task> tasks;
    tasks.reserve(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
        tasks.emplace_back([&, i](ExecutionGate& gate) { out[i] = run_lifecycle(requests[i], gate, ids[i]); });
    }
    scheduler.run(std::move(tasks));
    return out;
}

void Engine::stopped(const ActivityName& act, const ObjectId& /*obj*/)
{
    auto current = store_.state(act);
    TraceContext ctx{"control", "ongoing"};
    if (current != ActivityState::running ||
        !store_.try_transition(act, ActivityState::running, ActivityState::revoked, ctx)) {
        throw IllegalTransition(act, std::string(to_string(current)), "revoked");
    }
}

void Engine::hold(const ActivityName& act)
{
    auto current = store_.state(act);
    TraceContext ctx{"control", "ongoing"};
    if (current != ActivityState::running ||
        !store_.try_transition(act, ActivityState::running, ActivityState::hold, ctx)) {
        throw IllegalTransition(act, std::string(to_string(current)), "hold");
    }
}

void Engine::resume(const ActivityName& act)
{
    auto current = store_.state(act);
    TraceContext ctx{"control", "ongoing"};
    if (current != ActivityState::hold ||
        !store_.try_transition(act, ActivityState::hold, ActivityState::running, ctx)) {
        throw IllegalTransition(act, std::string(to_string(current)), "running");
    }
}

} // namespace acacd
