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

#include <gtest/gtest.h>

#include "acacd/engine.hpp"
#include "acacd/errors.hpp"
#include "acacd/serialize.hpp"
#include "oracles.hpp"

namespace acacd {
namespace {

using S = ActivityState;
using V = Verdict;

EngineConfig quiet()
{
    EngineConfig config;
    config.deterministic = true;
    return config;
}

struct Harness
{
    explicit Harness(const std::string& fixture, EngineConfig config = quiet())
        : bundle(oracle::load_fixture(fixture)), engine(bundle, config)
    {
    }

    Decision first() { return engine.run_lifecycle(bundle.requests().front()); }

    PolicyBundle bundle;
    Engine engine;
};

TEST(EngineTest, PhaseCheckCountsEveryDependency)
{
    Harness run("smart_farming_chain");
    auto sprayer = ObjectId("sprayer");
    auto pre = run.engine.phase_check(Phase::pre, "sprayingWeedKiller", sprayer);
    EXPECT_FALSE(pre.ok);
    EXPECT_EQ(pre.counters.ndc, 2u);
    EXPECT_EQ(pre.counters.ndu, 0u);
    auto ongoing = run.engine.phase_check(Phase::ongoing, "sprayingWeedKiller", sprayer);
    EXPECT_FALSE(ongoing.ok);
    EXPECT_EQ(ongoing.counters.ndc, 2u);
}

TEST(EngineTest, PhaseUpdateDrivesChain)
{
    Harness run("smart_farming_chain");
    auto sprayer = ObjectId("sprayer");
    auto update = run.engine.phase_update(Phase::pre, "sprayingWeedKiller", sprayer);
    EXPECT_TRUE(update.ok) << update.failure;
    // Two chain checks below mixingAMS; mixingWater, mixingVinegar, mixingAMS written.
    EXPECT_EQ(update.counters.ndc, 2u);
    EXPECT_EQ(update.counters.ndu, 3u);
    EXPECT_EQ(run.engine.store().state("mixingAMS"), S::finished);
    EXPECT_EQ(run.engine.store().state("thermalImaging"), S::running);
    EXPECT_TRUE(run.engine.phase_check(Phase::pre, "sprayingWeedKiller", sprayer).ok);
}

TEST(EngineTest, ChainRequestCounts)
{
    Harness run("smart_farming_chain");
    auto d = run.first();
    EXPECT_EQ(d.verdict, V::allowed) << d.reason;
    EXPECT_EQ(d.history, (std::vector<V>{V::allowed, V::continued, V::completed}));
    EXPECT_EQ(d.object, ObjectId("sprayer"));
    EXPECT_EQ(d.operation, OperationId("turnOn"));
    EXPECT_EQ(d.final_state, S::inactive);
    // pre: 2 checks + 2 chain checks; 3 writes.
    EXPECT_EQ(d.counters(Phase::pre).ndc, 4u);
    EXPECT_EQ(d.counters(Phase::pre).ndu, 3u);
    // ongoing: 2 checks; waterSpray written.
    EXPECT_EQ(d.counters(Phase::ongoing).ndc, 2u);
    EXPECT_EQ(d.counters(Phase::ongoing).ndu, 1u);
    // post: 2 checks + pesticideSpray under pullingWeedsUp; 2 writes.
    EXPECT_EQ(d.counters(Phase::post).ndc, 3u);
    EXPECT_EQ(d.counters(Phase::post).ndu, 2u);
}

TEST(EngineTest, GoldenExamples)
{
    {
        Harness run("example1");
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(d.history.front(), V::allowed);
    }
    {
        Harness run("example2");
        EXPECT_FALSE(run.engine.phase_check(Phase::pre, "playingNews", ObjectId("TV")).ok);
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(d.counters(Phase::pre).ndu, 1u);
        EXPECT_EQ(run.engine.store().state("playingSong"), S::inactive);
    }
    {
        Harness run("example3");
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(d.counters(Phase::post).ndu, 1u);
        EXPECT_EQ(run.engine.store().state("oilPumping"), S::running);
    }
    {
        Harness run("example4");
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::revoked);
        EXPECT_EQ(d.history, (std::vector<V>{V::allowed, V::revoked}));
        EXPECT_EQ(d.reason.rfind("ImmutableActivity", 0), 0u) << d.reason;
        EXPECT_EQ(run.engine.store().state("thermalImaging"), S::inactive);
        EXPECT_EQ(d.final_state, S::inactive);
    }
    {
        Harness run("example5");
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(d.counters(Phase::ongoing).ndu, 1u);
        EXPECT_EQ(run.engine.store().state("humidifying"), S::running);
    }
    {
        Harness run("example6");
        auto d = run.first();
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(run.engine.store().state("movingObjects"), S::inactive);
    }
}

TEST(EngineTest, CheckOnlyModes)
{
    EngineConfig config = quiet();
    config.pre_update = false;
    Harness pre_off("example2", config);
    auto d = pre_off.first();
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.final_state, S::aborted);
    EXPECT_EQ(pre_off.engine.store().state("playingSong"), S::running);

    config = quiet();
    config.ongoing_update = false;
    Harness ongoing_off("example5", config);
    d = ongoing_off.first();
    EXPECT_EQ(d.verdict, V::revoked);
    EXPECT_EQ(d.counters(Phase::ongoing).ndu, 0u);
    EXPECT_EQ(ongoing_off.engine.store().state("humidifying"), S::inactive);

    config = quiet();
    config.post_update = false;
    Harness post_off("example3", config);
    d = post_off.first();
    EXPECT_EQ(d.verdict, V::allowed);
    EXPECT_EQ(post_off.engine.store().state("oilPumping"), S::inactive);
}

TEST(EngineTest, ModeMatrixOnFarm)
{
    for (int mask = 0; mask < 8; ++mask) {
        EngineConfig config = quiet();
        config.pre_update = mask & 1;
        config.ongoing_update = mask & 2;
        config.post_update = mask & 4;
        Harness run("smart_farming", config);
        for (const auto& request : run.bundle.requests()) {
            auto d = run.engine.run_lifecycle(request);
            if (!config.pre_update) {
                EXPECT_EQ(d.counters(Phase::pre).ndu, 0u);
            }
            if (!config.ongoing_update) {
                EXPECT_EQ(d.counters(Phase::ongoing).ndu, 0u);
            }
            if (!config.post_update) {
                EXPECT_EQ(d.counters(Phase::post).ndu, 0u);
            }
            if (d.verdict != V::denied) {
                EXPECT_EQ(d.final_state, S::inactive);
            }
        }
        auto replayed = oracle::replay(oracle::initial_states(run.bundle), run.engine.trace().events());
        EXPECT_TRUE(replayed.illegal.empty()) << "mask " << mask;
    }
}

TEST(EngineTest, AllowedOnlyWhenPreHolds)
{
    for (const auto& name : oracle::fixture_names()) {
        Harness run(name);
        for (const auto& request : run.bundle.requests()) {
            auto d = run.engine.run_lifecycle(request);
            if (d.history.empty() || d.history.front() != V::allowed) {
                continue;
            }
            for (const auto& spec : run.bundle.get_da(request.activity, d.object, Phase::pre)) {
                ASSERT_TRUE(d.allow_snapshot.contains(spec.activity)) << name;
                EXPECT_EQ(d.allow_snapshot.at(spec.activity), spec.desired_state) << name << " " << spec.activity;
            }
        }
    }
}

TEST(EngineTest, TracesReplayCleanly)
{
    for (const auto& name : oracle::fixture_names()) {
        Harness run(name);
        for (const auto& request : run.bundle.requests()) {
            run.engine.run_lifecycle(request);
        }
        auto replayed = oracle::replay(oracle::initial_states(run.bundle), run.engine.trace().events());
        EXPECT_TRUE(replayed.illegal.empty()) << name << ": " << replayed.illegal.front();
        for (const auto& activity : run.bundle.activity_names()) {
            if (!run.bundle.activity(activity).is_mutable) {
                EXPECT_FALSE(replayed.changed.contains(activity)) << name << " " << activity;
            }
        }
    }
}

TEST(EngineTest, SecondUpdateIsNoOp)
{
    for (const auto& name : oracle::fixture_names()) {
        Harness run(name);
        for (const auto& entry : run.bundle.dependency_entries()) {
            for (auto phase : kAllPhases) {
                run.engine.phase_update(phase, entry.activity, entry.object);
                auto again = run.engine.phase_update(phase, entry.activity, entry.object);
                EXPECT_EQ(again.counters.ndu, 0u) << name << " " << entry.activity << " " << to_string(phase);
            }
        }
    }
}

TEST(EngineTest, RejectedRoots)
{
    Harness unknown("example1");
    auto d = unknown.engine.run_lifecycle({SourceId("robot"), "flying"});
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.reason.rfind("UnknownActivity", 0), 0u);
    EXPECT_FALSE(d.final_state);

    Harness immutable("example4");
    d = immutable.engine.run_lifecycle({SourceId("farmManager"), "thermalImaging"});
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.final_state, S::inactive);

    Harness cycle("circular_chain");
    d = cycle.first();
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.reason.rfind("CycleDetected", 0), 0u) << d.reason;
    EXPECT_EQ(d.final_state, S::aborted);
    EXPECT_EQ(cycle.engine.store().state("act2"), S::inactive);

    Harness conflict("unsatisfiable_demand");
    d = conflict.first();
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.reason.rfind("PolicyConflict", 0), 0u) << d.reason;
}

TEST(EngineTest, MissingObjectAborts)
{
    PolicyDocuments docs;
    docs.activity = R"({"lonely": {"state": "inactive"}})";
    docs.request = R"([{"source": "someone", "activity": "lonely"}])";
    auto bundle = PolicyBundle::parse(docs);
    Engine engine(bundle, quiet());
    auto d = engine.run_lifecycle(bundle.requests().front());
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.reason.rfind("NoObjectForActivity", 0), 0u) << d.reason;
    EXPECT_EQ(d.final_state, S::aborted);
    // An aborted root is accepted again.
    d = engine.run_lifecycle(bundle.requests().front());
    EXPECT_EQ(d.final_state, S::aborted);
}

TEST(EngineTest, VacuousPolicyAllowsEverything)
{
    PolicyDocuments docs;
    docs.activity = R"({"a": {"state": "inactive"}, "b": {"state": "finished"}})";
    docs.object = R"({"a": "x", "b": "y"})";
    docs.operation = R"([{"activity": "a", "object": "x", "operation": "on"},
                         {"activity": "b", "object": "y", "operation": "on"}])";
    auto bundle = PolicyBundle::parse(docs);
    Engine engine(bundle, quiet());
    for (const auto* name : {"a", "b"}) {
        auto d = engine.run_lifecycle({SourceId("s"), name});
        EXPECT_EQ(d.verdict, V::allowed);
        EXPECT_EQ(d.final_state, S::inactive);
        for (auto phase : kAllPhases) {
            EXPECT_EQ(d.counters(phase).ndc, 0u);
            EXPECT_EQ(d.counters(phase).ndu, 0u);
        }
    }
}

TEST(EngineTest, ExpiredDeadlineDenies)
{
    EngineConfig config = quiet();
    config.request_deadline = std::chrono::milliseconds(-1);
    Harness run("example1", config);
    auto d = run.first();
    EXPECT_EQ(d.verdict, V::denied);
    EXPECT_EQ(d.reason.rfind("RequestTimeout", 0), 0u) << d.reason;
}

TEST(EngineTest, RepeatedTicks)
{
    EngineConfig config = quiet();
    config.ongoing_ticks = 3;
    Harness run("example5", config);
    auto d = run.first();
    EXPECT_EQ(d.history, (std::vector<V>{V::allowed, V::continued, V::continued, V::continued, V::completed}));
    EXPECT_EQ(d.counters(Phase::ongoing).ndc, 3u);
    EXPECT_EQ(d.counters(Phase::ongoing).ndu, 1u);
}

TEST(EngineTest, ControlTransitions)
{
    Harness run("smart_farming");
    auto cooler = ObjectId("airCooler");
    EXPECT_THROW(run.engine.stopped("coolingGreenhouse", cooler), IllegalTransition);
    EXPECT_THROW(run.engine.resume("thermalImaging"), IllegalTransition);
    run.engine.hold("thermalImaging");
    EXPECT_EQ(run.engine.store().state("thermalImaging"), S::hold);
    run.engine.resume("thermalImaging");
    EXPECT_EQ(run.engine.store().state("thermalImaging"), S::running);
    run.engine.stopped("thermalImaging", ObjectId("aerialDrone"));
    EXPECT_EQ(run.engine.store().state("thermalImaging"), S::revoked);
    run.engine.reset();
    EXPECT_EQ(run.engine.store().state("thermalImaging"), S::running);
    EXPECT_EQ(run.engine.trace().size(), 0u);
}

TEST(EngineTest, SharedDependencyUnderInterleaving)
{
    for (auto schedule : {Schedule::round_robin, Schedule::seeded_random}) {
        Harness run("shared_dependency");
        auto decisions = run.engine.run_concurrent(run.bundle.requests(), schedule, 11);
        ASSERT_EQ(decisions.size(), 3u);
        for (const auto& d : decisions) {
            EXPECT_EQ(d.verdict, V::allowed) << d.reason;
        }
        EXPECT_TRUE(oracle::lock_violations(run.engine.trace().events()).empty());
        auto snap = run.engine.store().snapshot();
        EXPECT_EQ(snap.at("act6"), S::inactive);
        EXPECT_EQ(snap.at("act5"), S::running);
    }
}

TEST(EngineTest, ThreadedRunTerminates)
{
    Harness run("shared_dependency");
    auto decisions = run.engine.run_concurrent(run.bundle.requests(), Schedule::threaded);
    ASSERT_EQ(decisions.size(), 3u);
    EXPECT_TRUE(oracle::lock_violations(run.engine.trace().events()).empty());
    auto replayed = oracle::replay(oracle::initial_states(run.bundle), run.engine.trace().events());
    EXPECT_TRUE(replayed.illegal.empty());
}

TEST(EngineTest, DeterministicRecordOmitsTiming)
{
    Harness run("smart_farming_chain");
    auto d = run.first();
    auto line = to_json_line(d, false);
    EXPECT_EQ(line.find("elapsed_ms"), std::string::npos);
    EXPECT_NE(to_json_line(d, true).find("elapsed_ms"), std::string::npos);
    auto parsed = nlohmann::json::parse(line);
    EXPECT_EQ(parsed["verdict"], "allowed");
    EXPECT_EQ(parsed["phases"]["pre"]["ndc"], 4);
}

} // namespace
} // namespace acacd
