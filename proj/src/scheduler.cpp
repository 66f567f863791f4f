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

#include "acacd/scheduler.hpp"

#include <thread>

#include "acacd/errors.hpp"

namespace acacd {

void InlineGate::await(const std::string& activity, const std::function<bool()>& ready)
{
    for (std::size_t i = 0; i < max_polls_; ++i) {
        if (ready()) {
            return;
        }
    }
    throw LockTimeout(activity);
}

void ThreadedGate::await(const std::string& activity, const std::function<bool()>& ready)
{
    auto deadline = std::chrono::steady_clock::now() + timeout_;
    while (!ready()) {
        if (std::chrono::steady_clock::now() >= deadline) {
            throw LockTimeout(activity);
        }
        std::this_thread::sleep_for(std::chrono::microseconds(50));
    }
}

class CooperativeScheduler::TaskGate final : public ExecutionGate
{
public:
    TaskGate(CooperativeScheduler& owner, std::size_t self) : owner_(owner), self_(self) {}

    void step() override { owner_.yield_from(self_); }
    bool wall_clock() const noexcept override { return false; }

    void await(const std::string& activity, const std::function<bool()>& ready) override
    {
        for (std::size_t i = 0; i < owner_.max_wait_steps_; ++i) {
            if (ready()) {
                return;
            }
            owner_.yield_from(self_);
        }
        if (!ready()) {
            throw LockTimeout(activity);
        }
    }

private:
    CooperativeScheduler& owner_;
    std::size_t self_;
};

CooperativeScheduler::CooperativeScheduler(Mode mode, std::uint64_t seed, std::size_t max_wait_steps)
    : mode_(mode), rng_(seed), max_wait_steps_(max_wait_steps)
{
}

std::size_t CooperativeScheduler::pick_next(std::size_t self)
{
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < done_.size(); ++i) {
        if (!done_[i]) {
            live.push_back(i);
        }
    }
    if (live.empty()) {
        return self;
    }
    if (mode_ == Mode::seeded_random) {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        return live[pick(rng_)];
    }
    for (std::size_t k = 1; k <= done_.size(); ++k) {
        auto candidate = (self + k) % done_.size();
        if (!done_[candidate]) {
            return candidate;
        }
    }
    return self;
}

void CooperativeScheduler::wait_turn(std::unique_lock<std::mutex>& lock, std::size_t self)
{
    turn_.wait(lock, [&] { return current_ == self; });
}

void CooperativeScheduler::yield_from(std::size_t self)
{
    std::unique_lock lock(mutex_);
    ++steps_;
    current_ = pick_next(self);
    turn_.notify_all();
    wait_turn(lock, self);
}

void CooperativeScheduler::finish(std::size_t self)
{
    std::lock_guard lock(mutex_);
    done_[self] = true;
    current_ = pick_next(self);
    turn_.notify_all();
}

void CooperativeScheduler::run(std::vector<Task> tasks)
{
    if (tasks.empty()) {
        return;
    }
    {
        std::lock_guard lock(mutex_);
        done_.assign(tasks.size(), false);
        steps_ = 0;
        current_ = mode_ == Mode::seeded_random ? pick_next(0) : 0;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        threads.emplace_back([&, i] {
            {
                std::unique_lock lock(mutex_);
                wait_turn(lock, i);
            }
            try {
                TaskGate gate(*this, i);
                tasks[i](gate);
            } catch (...) {
                std::lock_guard guard(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
            finish(i);
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace acacd
