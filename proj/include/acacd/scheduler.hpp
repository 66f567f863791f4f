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

#ifndef ACACD_SCHEDULER_HPP
#define ACACD_SCHEDULER_HPP

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <vector>

namespace acacd {

/// Yield and wait points for a resolution pass. The pass calls step() between
/// store operations and await() whenever it must block on another pass.
class ExecutionGate
{
public:
    virtual ~ExecutionGate() = default;

    virtual void step() = 0;

    /// Returns once ready() is true. Throws LockTimeout naming `activity` when
    /// the gate's bound runs out first.
    virtual void await(const std::string& activity, const std::function<bool()>& ready) = 0;

    /// False when sleeping would stall every other task.
    virtual bool wall_clock() const noexcept { return true; }
};

/// A lone pass on the calling thread. Nothing else can release a lock, so
/// await() only re-polls a bounded number of times.
class InlineGate final : public ExecutionGate
{
public:
    explicit InlineGate(std::size_t max_polls = 1000) : max_polls_(max_polls) {}

    void step() override {}
    void await(const std::string& activity, const std::function<bool()>& ready) override;

private:
    std::size_t max_polls_;
};

/// Free-running threads. await() polls until a wall-clock deadline.
class ThreadedGate final : public ExecutionGate
{
public:
    explicit ThreadedGate(std::chrono::milliseconds timeout) : timeout_(timeout) {}

    void step() override {}
    void await(const std::string& activity, const std::function<bool()>& ready) override;

private:
    std::chrono::milliseconds timeout_;
};

/// Runs tasks on separate threads but lets exactly one make progress at a
/// time. Control changes hands only at step() and await(), so a schedule is
/// a pure function of the mode and seed.
class CooperativeScheduler
{
public:
    enum class Mode
    {
        round_robin,
        seeded_random,
    };

    using Task = std::function<void(ExecutionGate&)>;

    CooperativeScheduler(Mode mode, std::uint64_t seed = 0, std::size_t max_wait_steps = 1'000'000);

    /// Runs every task to completion. The first exception thrown by a task is
    /// rethrown after all threads have joined.
    void run(std::vector<Task> tasks);

    /// Context switches performed by the last run().
    std::uint64_t steps() const noexcept { return steps_; }

private:
    class TaskGate;

    void yield_from(std::size_t self);
    void finish(std::size_t self);
    std::size_t pick_next(std::size_t self);
    void wait_turn(std::unique_lock<std::mutex>& lock, std::size_t self);

    Mode mode_;
    std::mt19937_64 rng_;
    std::size_t max_wait_steps_;
    std::mutex mutex_;
    std::condition_variable turn_;
    std::vector<bool> done_;
    std::size_t current_ = 0;
    std::uint64_t steps_ = 0;
};

} // namespace acacd

#endif // ACACD_SCHEDULER_HPP
