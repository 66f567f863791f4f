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

#ifndef ACACD_POLICY_HPP
#define ACACD_POLICY_HPP

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "acacd/activity.hpp"
#include "acacd/state.hpp"

namespace acacd {

enum class Phase : std::uint8_t
{
    pre,
    ongoing,
    post,
};

inline constexpr std::array<Phase, 3> kAllPhases{Phase::pre, Phase::ongoing, Phase::post};

std::string_view to_string(Phase phase) noexcept;

struct DependencySpec
{
    ActivityName activity;
    ActivityState desired_state = ActivityState::inactive;

    friend bool operator==(const DependencySpec&, const DependencySpec&) = default;
};

struct PhaseDependencies
{
    std::vector<DependencySpec> pre;
    std::vector<DependencySpec> ongoing;
    std::vector<DependencySpec> post;

    const std::vector<DependencySpec>& of(Phase phase) const noexcept;
};

/// Key of a dependencies-of-dependencies entry: the transition of `activity`
/// from `current` to `desired` that the listed activities gate.
struct TransitionDependencyKey
{
    ActivityName activity;
    ActivityState current = ActivityState::inactive;
    ActivityState desired = ActivityState::inactive;

    friend auto operator<=>(const TransitionDependencyKey&, const TransitionDependencyKey&) = default;
};

struct ActivityInfo
{
    ActivityState initial_state = ActivityState::inactive;
    bool is_mutable = true;
};

/// Raw contents of the six policy files.
struct PolicyDocuments
{
    std::string request = "[]";
    std::string activity = "{}";
    std::string object = "{}";
    std::string operation = "[]";
    std::string dependencies = "[]";
    std::string dependencies_of_dependencies = "[]";
};

struct BundlePaths
{
    std::filesystem::path request;
    std::filesystem::path activity;
    std::filesystem::path object;
    std::filesystem::path operation;
    std::filesystem::path dependencies;
    std::filesystem::path dependencies_of_dependencies;

    /// The conventional file names inside one policy directory.
    static BundlePaths in_directory(const std::filesystem::path& dir);
};

/// Fully loaded and cross-validated policy. Immutable after construction.
class PolicyBundle
{
public:
    struct DependencyEntry
    {
        ActivityName activity;
        ObjectId object;
        PhaseDependencies phases;
    };

    struct DodEntry
    {
        TransitionDependencyKey key;
        std::vector<DependencySpec> dependencies;
    };

    /// Parses and validates. Throws ParseError, DanglingReference,
    /// DuplicateKey or UnknownState.
    static PolicyBundle parse(const PolicyDocuments& docs);

    /// Activity names in activity.json order.
    const std::vector<ActivityName>& activity_names() const noexcept { return activity_order_; }
    bool has_activity(std::string_view name) const;
    /// Throws UnknownActivity.
    const ActivityInfo& activity(std::string_view name) const;

    /// Throws NoObjectForActivity.
    ObjectId get_object(std::string_view activity) const;
    /// Throws NoOperationForPair.
    OperationId get_operation(std::string_view activity, const ObjectId& object) const;

    /// Dependencies of `activity` on `object` for one phase, in file order.
    /// Empty when nothing is declared.
    const std::vector<DependencySpec>& get_da(std::string_view activity, const ObjectId& object,
                                              Phase phase) const;

    /// Dependencies gating one transition of a dependent activity. Empty when
    /// the transition is independent.
    const std::vector<DependencySpec>& get_doda(const TransitionDependencyKey& key) const;

    /// Desired state of `doda` for the transition `key`, if `doda` gates it.
    std::optional<ActivityState> get_desired_doda_state(const TransitionDependencyKey& key,
                                                        std::string_view doda) const;

    const std::vector<ActivityRequest>& requests() const noexcept { return requests_; }
    const std::vector<DependencyEntry>& dependency_entries() const noexcept { return dependency_entries_; }
    const std::vector<DodEntry>& dod_entries() const noexcept { return dod_entries_; }

    /// Every object named in object.json or operation.json.
    const std::vector<ObjectId>& objects() const noexcept { return objects_; }

private:
    std::vector<ActivityName> activity_order_;
    std::map<ActivityName, ActivityInfo, std::less<>> activities_;
    std::map<ActivityName, ObjectId, std::less<>> object_of_;
    std::map<std::pair<ActivityName, ObjectId>, OperationId> operations_;
    std::vector<DependencyEntry> dependency_entries_;
    std::map<std::pair<ActivityName, ObjectId>, std::size_t> dependency_index_;
    std::vector<DodEntry> dod_entries_;
    std::map<TransitionDependencyKey, std::size_t> dod_index_;
    std::vector<ActivityRequest> requests_;
    std::vector<ObjectId> objects_;
};

/// Reads the six files and parses them. Throws IoError when a file cannot be
/// read, otherwise whatever PolicyBundle::parse throws.
PolicyBundle load_bundle(const BundlePaths& paths);

inline PolicyBundle load_bundle(const std::filesystem::path& dir)
{
    return load_bundle(BundlePaths::in_directory(dir));
}

} // namespace acacd

#endif // ACACD_POLICY_HPP
