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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acacd/bench.hpp"
#include "acacd/engine.hpp"
#include "acacd/errors.hpp"
#include "acacd/graph.hpp"
#include "acacd/policy.hpp"
#include "acacd/serialize.hpp"

namespace {

enum Exit : int
{
    kOk = 0,
    kInvalid = 1,
    kLoadError = 2,
    kIoError = 3,
};

struct LoadFailure
{
    int code;
};

acacd::PolicyBundle load(const std::string& dir)
{
    try {
        if (!std::filesystem::is_directory(dir)) {
            throw acacd::IoError("policy directory '" + dir + "' not found");
        }
        return acacd::load_bundle(std::filesystem::path(dir));
    } catch (const acacd::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        throw LoadFailure{kIoError};
    } catch (const acacd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        throw LoadFailure{kLoadError};
    }
}

acacd::EngineConfig config_for(bool deterministic)
{
    acacd::EngineConfig config;
    config.deterministic = deterministic;
    return config;
}

int cmd_validate(const std::string& dir)
{
    auto bundle = load(dir);
    auto report = acacd::validate(acacd::DependencyGraph::build(bundle));
    std::cout << acacd::format_report(report) << acacd::to_json_line(report) << '\n';
    if (!report.clean()) {
        std::cerr << "validation failed\n";
        return kInvalid;
    }
    return kOk;
}

int cmd_decide(const std::string& dir, const std::string& source, const std::string& activity, bool deterministic,
               bool trace)
{
    auto bundle = load(dir);
    acacd::Engine engine(bundle, config_for(deterministic));
    if (bundle.has_activity(activity)) {
        if (auto refusal = acacd::refusal_for(engine.graph(), engine.validation(), activity)) {
            std::cout << acacd::format_report(engine.validation()) << acacd::to_json_line(engine.validation())
                      << '\n';
            std::cerr << "refused: " << refusal->detail << '\n';
            return kInvalid;
        }
    }
    auto decision = engine.run_lifecycle({acacd::SourceId(source), activity});
    std::cout << acacd::to_json_line(decision, !deterministic) << '\n';
    if (trace) {
        for (const auto& event : engine.trace().events()) {
            std::cout << acacd::to_json_line(event) << '\n';
        }
    }
    return kOk;
}

int cmd_simulate(const std::string& dir, std::size_t copies, std::optional<std::uint64_t> seed, bool deterministic)
{
    auto bundle = load(dir);
    acacd::Engine engine(bundle, config_for(deterministic || seed.has_value()));
    std::vector<acacd::ActivityRequest> requests;
    for (std::size_t i = 0; i < copies; ++i) {
        requests.insert(requests.end(), bundle.requests().begin(), bundle.requests().end());
    }
    auto schedule = seed ? acacd::Schedule::seeded_random
                         : (deterministic ? acacd::Schedule::round_robin : acacd::Schedule::threaded);
    auto decisions = engine.run_concurrent(requests, schedule, seed.value_or(0));

    const bool timing = !deterministic && !seed;
    std::array<acacd::PhaseCounters, 3> total{};
    std::size_t allowed = 0;
    std::size_t denied = 0;
    std::size_t revoked = 0;
    for (const auto& d : decisions) {
        std::cout << acacd::to_json_line(d, timing) << '\n';
        for (std::size_t p = 0; p < total.size(); ++p) {
            total[p] += d.phases[p];
        }
        allowed += d.verdict == acacd::Verdict::allowed;
        denied += d.verdict == acacd::Verdict::denied;
        revoked += d.verdict == acacd::Verdict::revoked;
    }
    std::cout << "{\"requests\":" << decisions.size() << ",\"allowed\":" << allowed << ",\"denied\":" << denied
              << ",\"revoked\":" << revoked;
    for (auto phase : acacd::kAllPhases) {
        const auto& c = total[static_cast<std::size_t>(phase)];
        std::cout << ",\"" << acacd::to_string(phase) << "\":{\"ndc\":" << c.ndc << ",\"ndu\":" << c.ndu << '}';
    }
    std::cout << "}\n";
    return kOk;
}

int cmd_bench(const std::string& dir, const std::vector<std::size_t>& batches, bool reset_state)
{
    auto bundle = load(dir);
    auto report = acacd::run_bench(bundle, batches, reset_state, config_for(true));
    std::cout << acacd::format_table(report);
    for (const auto& line : acacd::to_json_lines(report, true)) {
        std::cout << line << '\n';
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acacd: activity-centric access control decision engine"};
    app.require_subcommand(1);

    std::string policy;
    bool deterministic = false;

    auto* validate = app.add_subcommand("validate", "Report circular dependencies and policy conflicts");
    validate->add_option("--policy", policy, "Policy directory")->required();

    std::string source;
    std::string activity;
    bool trace = false;
    auto* decide = app.add_subcommand("decide", "Run one request through its life cycle");
    decide->add_option("--policy", policy, "Policy directory")->required();
    decide->add_option("--source", source, "Requesting source")->required();
    decide->add_option("--activity", activity, "Requested activity")->required();
    decide->add_flag("--deterministic", deterministic, "No sleeping, no timing fields");
    decide->add_flag("--trace", trace, "Print the event trace after the decision");

    std::size_t copies = 1;
    std::optional<std::uint64_t> seed;
    auto* simulate = app.add_subcommand("simulate", "Run every request in request.json concurrently");
    simulate->add_option("--policy", policy, "Policy directory")->required();
    simulate->add_option("--requests", copies, "Replicate request.json this many times")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Seeded random interleaving");
    simulate->add_flag("--deterministic", deterministic, "Round-robin interleaving");

    std::vector<std::size_t> batches;
    bool reset_state = false;
    auto* bench = app.add_subcommand("bench", "Counters and timings per request batch");
    bench->add_option("--policy", policy, "Policy directory")->required();
    bench->add_option("--batches", batches, "Batch sizes, comma separated")->delimiter(',')->required();
    bench->add_flag("--reset-state", reset_state, "Restore initial states before every request");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*validate) {
            return cmd_validate(policy);
        }
        if (*decide) {
            return cmd_decide(policy, source, activity, deterministic, trace);
        }
        if (*simulate) {
            return cmd_simulate(policy, copies, seed, deterministic);
        }
        if (*bench) {
            return cmd_bench(policy, batches, reset_state);
        }
    } catch (const LoadFailure& f) {
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kOk;
}
