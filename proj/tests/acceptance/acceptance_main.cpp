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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "acacd/engine.hpp"
#include "acacd/resolver.hpp"
#include "oracles.hpp"

namespace {

using namespace acacd;
using S = ActivityState;
using Clock = std::chrono::steady_clock;

struct Check
{
    std::ostringstream failures;
    int count = 0;

    void expect(bool ok, const std::string& what)
    {
        if (!ok && count++ < 5) {
            failures << "\n    " << what;
        }
    }
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

EngineConfig deterministic()
{
    EngineConfig config;
    config.deterministic = true;
    return config;
}

std::vector<nlohmann::json> json_lines(const std::string& out)
{
    std::vector<nlohmann::json> records;
    for (const auto& line : oracle::lines_of(out)) {
        if (!line.empty() && line.front() == '{') {
            records.push_back(nlohmann::json::parse(line));
        }
    }
    return records;
}

void golden_examples(Check& c)
{
    auto start = Clock::now();
    auto decide = [](const std::string& name, const std::function<void(Engine&, const Decision&)>& verify) {
        auto bundle = oracle::load_fixture(name);
        Engine engine(bundle, deterministic());
        verify(engine, engine.run_lifecycle(bundle.requests().front()));
    };
    decide("example1", [&](Engine& e, const Decision& d) {
        c.expect(e.phase_check(Phase::pre, "forceGeneration", ObjectId("motor")).ok, "example1 pre check");
        c.expect(d.verdict == Verdict::allowed, "example1 allowed");
    });
    decide("example2", [&](Engine& e, const Decision& d) {
        c.expect(d.verdict == Verdict::allowed, "example2 allowed");
        c.expect(d.counters(Phase::pre).ndu == 1, "example2 pre update");
        c.expect(e.store().state("playingSong") == S::inactive, "example2 playingSong inactive");
    });
    {
        auto bundle = oracle::load_fixture("example2");
        Engine engine(bundle, deterministic());
        c.expect(!engine.phase_check(Phase::pre, "playingNews", ObjectId("TV")).ok, "example2 pre check false");
    }
    {
        auto bundle = oracle::load_fixture("example3");
        Engine engine(bundle, deterministic());
        c.expect(!engine.phase_check(Phase::post, "hydrotreating", ObjectId("hydrotreater")).ok,
                 "example3 post check false");
    }
    decide("example3", [&](Engine& e, const Decision& d) {
        c.expect(d.verdict == Verdict::allowed, "example3 allowed");
        c.expect(e.store().state("oilPumping") == S::running, "example3 oilPumping running");
    });
    decide("example4", [&](Engine&, const Decision& d) {
        c.expect(d.verdict == Verdict::revoked, "example4 revoked");
        c.expect(d.reason.rfind("ImmutableActivity", 0) == 0, "example4 reason " + d.reason);
    });
    decide("example5", [&](Engine& e, const Decision& d) {
        c.expect(d.verdict == Verdict::allowed, "example5 allowed");
        c.expect(e.store().state("humidifying") == S::running, "example5 humidifying running");
        std::vector<S> hops;
        for (const auto& ev : e.trace().events()) {
            if (ev.kind == TraceKind::update && ev.activity == "humidifying") {
                hops.push_back(ev.from);
                hops.push_back(ev.to);
            }
        }
        bool seen = hops == std::vector<S>{S::inactive, S::dormant, S::dormant, S::running};
        c.expect(seen, "example5 humidifying inactive->running");
    });
    decide("example6", [&](Engine& e, const Decision& d) {
        c.expect(d.verdict == Verdict::allowed, "example6 allowed");
        c.expect(e.store().state("movingObjects") == S::inactive, "example6 movingObjects inactive");
    });
    double took = seconds_since(start);
    c.expect(took < 1.0, "took " + std::to_string(took) + " s");
}

void chain_reproduction(Check& c)
{
    auto decide = oracle::run_cli("decide --policy " + oracle::fixture("smart_farming_chain").string() +
                                  " --source fieldWorker --activity sprayingWeedKiller --deterministic");
    auto records = json_lines(decide.out);
    c.expect(decide.exit_code == 0 && !records.empty(), "decide ran");
    if (!records.empty()) {
        c.expect(records[0]["phases"]["pre"]["ndc"] == 4, "pre ndc " + records[0]["phases"]["pre"]["ndc"].dump());
        c.expect(records[0]["phases"]["pre"]["ndu"] == 3, "pre ndu " + records[0]["phases"]["pre"]["ndu"].dump());
    }
    auto again = oracle::run_cli("decide --policy " + oracle::fixture("smart_farming_chain").string() +
                                 " --source fieldWorker --activity sprayingWeedKiller --deterministic");
    c.expect(again.out == decide.out, "decide output not deterministic");

    auto bench = oracle::run_cli("bench --policy " + oracle::fixture("smart_farming_chain").string() +
                                 " --batches 10,20,30,40 --reset-state");
    auto rows = json_lines(bench.out);
    c.expect(rows.size() == 4, "bench rows " + std::to_string(rows.size()));
    if (rows.size() == 4) {
        c.expect(rows[0]["pre"]["ndc"] == 40 && rows[0]["pre"]["ndu"] == 30, "bench row 10 pre 40/30");
        for (const auto* phase : {"pre", "ongoing", "post"}) {
            for (const auto* counter : {"ndc", "ndu"}) {
                long base = rows[0][phase][counter].get<long>();
                for (long i = 1; i < 4; ++i) {
                    c.expect(rows[i][phase][counter].get<long>() == base * (i + 1),
                             std::string("non-linear ") + phase + "." + counter);
                }
            }
        }
    }
}

void deadlock_detection(Check& c)
{
    auto cyclic = oracle::run_cli("validate --policy " + oracle::fixture("circular_chain").string());
    c.expect(cyclic.exit_code == 1, "cyclic fixture accepted");
    c.expect(cyclic.out.find("cycle: [act1, act2, act3]") != std::string::npos, "cycle line missing");
    auto records = json_lines(cyclic.out);
    c.expect(!records.empty() && records[0]["cycles"] == nlohmann::json::parse(R"([["act1","act2","act3"]])"),
             "cycle list");
    auto farm = oracle::run_cli("validate --policy " + oracle::fixture("smart_farming").string());
    c.expect(farm.exit_code == 0, "farm policy rejected");
}

void race_suite(Check& c)
{
    auto start = Clock::now();
    auto bundle = oracle::load_fixture("shared_dependency");
    auto requests = bundle.requests();
    requests.insert(requests.end(), bundle.requests().begin(), bundle.requests().end());
    std::optional<StateSnapshot> reference;
    int contended = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Engine engine(bundle, deterministic());
        auto decisions = engine.run_concurrent(requests, Schedule::seeded_random, seed);
        auto events = engine.trace().events();
        contended += std::any_of(events.begin(), events.end(),
                                 [](const TraceEvent& ev) { return ev.kind == TraceKind::wait; });
        auto violations = oracle::lock_violations(events);
        c.expect(violations.empty(), "seed " + std::to_string(seed) + ": " +
                                         (violations.empty() ? "" : violations.front()));
        auto replayed = oracle::replay(oracle::initial_states(bundle), events);
        c.expect(replayed.illegal.empty(), "seed " + std::to_string(seed) + " illegal edge");
        auto snap = engine.store().snapshot();
        if (!reference) {
            reference = snap;
        }
        c.expect(snap == *reference, "seed " + std::to_string(seed) + " diverged");
    }
    if (reference) {
        c.expect(reference->at("act6") == S::inactive && reference->at("act3") == S::running &&
                     reference->at("r1") == S::inactive,
                 "unexpected final state");
    }
    c.expect(contended > 0, "no schedule ever waited on a lock");
    double took = seconds_since(start);
    c.expect(took < 60.0, "took " + std::to_string(took) + " s");
}

void state_machine_suite(Check& c)
{
    c.expect(valid_transition(S::aborted, S::inactive), "aborted -> inactive missing");
    for (const auto& from : kAllStates) {
        for (const auto& to : kAllStates) {
            // Staying put is a no-op, not an edge.
            bool expected = from == to || oracle::lifecycle_edges().contains(
                                              {std::string(to_string(from)), std::string(to_string(to))});
            c.expect(valid_transition(from, to) == expected,
                     std::string(to_string(from)) + " -> " + std::string(to_string(to)));
        }
    }
    for (const auto& name : oracle::fixture_names()) {
        auto bundle = oracle::load_fixture(name);
        std::vector<std::vector<TraceEvent>> traces;
        {
            Engine engine(bundle, deterministic());
            for (const auto& r : bundle.requests()) {
                engine.run_lifecycle(r);
            }
            traces.push_back(engine.trace().events());
        }
        {
            Engine engine(bundle, deterministic());
            engine.run_concurrent(bundle.requests(), Schedule::round_robin);
            traces.push_back(engine.trace().events());
        }
        for (const auto& events : traces) {
            auto replayed = oracle::replay(oracle::initial_states(bundle), events);
            c.expect(replayed.illegal.empty(), name + ": " + (replayed.illegal.empty() ? "" : replayed.illegal[0]));
            for (const auto& activity : bundle.activity_names()) {
                c.expect(bundle.activity(activity).is_mutable || !replayed.changed.contains(activity),
                         name + ": immutable " + activity + " changed");
            }
        }
    }
}

void conflict_oracle(Check& c)
{
    auto start = Clock::now();
    std::mt19937_64 rng(20240611);
    int flagged = 0;
    for (int round = 0; round < 200; ++round) {
        auto random = oracle::random_bundle(rng, 10);
        auto bundle = PolicyBundle::parse(random.docs);
        TraceLog trace;
        StateStore store(bundle, trace);
        InlineGate gate;
        ResolutionPass pass(bundle, store, gate, "oracle");
        pass.begin("pre");
        for (const auto& spec : bundle.get_da(random.root, ObjectId("device"), Phase::pre)) {
            pass.recursive_check_with_conflict_detection(spec.activity, store.state(spec.activity),
                                                         spec.desired_state);
        }
        auto demanded = oracle::demanded_states(random);
        for (const auto& name : bundle.activity_names()) {
            auto it = demanded.find(name);
            bool expected = it != demanded.end() && it->second.size() >= 2;
            flagged += expected;
            c.expect(pass.has_conflicting_desired_state(name) == expected,
                     "bundle " + std::to_string(round) + " activity " + name);
        }
    }
    c.expect(flagged > 0, "no bundle produced a conflict");
    double took = seconds_since(start);
    c.expect(took < 30.0, "took " + std::to_string(took) + " s");
}

void idempotence(Check& c)
{
    for (const auto& name : oracle::fixture_names()) {
        auto bundle = oracle::load_fixture(name);
        Engine engine(bundle, deterministic());
        for (const auto& entry : bundle.dependency_entries()) {
            for (auto phase : kAllPhases) {
                engine.phase_update(phase, entry.activity, entry.object);
                auto again = engine.phase_update(phase, entry.activity, entry.object);
                c.expect(again.counters.ndu == 0, name + " " + entry.activity + " " + std::string(to_string(phase)) +
                                                      " ndu " + std::to_string(again.counters.ndu));
            }
        }
    }
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria{
        {"golden examples 1-6", golden_examples},
        {"chain reproduction and bench linearity", chain_reproduction},
        {"deadlock detection", deadlock_detection},
        {"race-condition property suite", race_suite},
        {"state-machine suite", state_machine_suite},
        {"conflict-flag oracle", conflict_oracle},
        {"idempotence", idempotence},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Check check;
        try {
            run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        if (check.count == 0) {
            std::cout << "PASS " << name << "\n";
        } else {
            ++failed;
            std::cout << "FAIL " << name << " (" << check.count << " problems)" << check.failures.str() << "\n";
        }
    }
    return failed == 0 ? 0 : 1;
}
