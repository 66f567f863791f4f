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

#ifndef ACACD_GRAPH_HPP
#define ACACD_GRAPH_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acacd/policy.hpp"

namespace acacd {

/// parent -> dependency. Phase edges leave a requestable activity and carry
/// the phase; chain edges come from dependencies-of-dependencies and carry the
/// parent transition they gate.
struct DependencyEdge
{
    ActivityName from;
    ActivityName to;
    ActivityState desired = ActivityState::inactive;
    std::optional<Phase> phase;
    std::optional<TransitionDependencyKey> transition;

    bool is_phase_edge() const noexcept { return phase.has_value(); }
};

class DependencyGraph
{
public:
    static DependencyGraph build(const PolicyBundle& bundle);

    void add_node(const ActivityName& name);
    void add_root(const ActivityName& name);
    void add_edge(DependencyEdge edge);

    /// Sorted.
    const std::set<ActivityName>& nodes() const noexcept { return nodes_; }
    const std::set<ActivityName>& roots() const noexcept { return roots_; }
    const std::vector<DependencyEdge>& edges() const noexcept { return edges_; }
    std::vector<const DependencyEdge*> out_edges(const ActivityName& from) const;

    /// Activities `root` can touch: its own phase targets, then chain edges.
    std::set<ActivityName> reach(const ActivityName& root) const;

private:
    std::set<ActivityName> nodes_;
    std::set<ActivityName> roots_;
    std::vector<DependencyEdge> edges_;
    std::multimap<ActivityName, std::size_t> out_;
};

using Cycle = std::vector<ActivityName>;

/// Elementary cycles, smallest name first, each reported once. A cycle may
/// use at most one phase edge: a walk through two different requested
/// activities' phase lists is never resolved in one pass.
std::vector<Cycle> detect_cycles(const DependencyGraph& graph);

enum class ConflictKind
{
    resolvable,
    unsatisfiable,
};

std::string_view to_string(ConflictKind kind) noexcept;

struct ConflictWarning
{
    ActivityName root;
    Phase phase = Phase::pre;
    ActivityName activity;
    std::vector<ActivityState> demanded; // sorted, at least two
    ConflictKind kind = ConflictKind::resolvable;
};

/// One warning per activity demanded in two or more states within one
/// (root, phase) resolution. {t, inactive} with t terminal is resolvable
/// because t always drains to inactive; anything else is unsatisfiable.
std::vector<ConflictWarning> detect_policy_conflicts(const DependencyGraph& graph);

struct ValidationReport
{
    std::vector<Cycle> cycles;
    std::vector<ConflictWarning> conflicts;

    bool clean() const;
};

ValidationReport validate(const DependencyGraph& graph);

struct Refusal
{
    enum class Kind
    {
        cycle,
        conflict,
    };

    Kind kind;
    std::string detail;
};

/// Why a request for `root` must be refused before any update, if at all.
std::optional<Refusal> refusal_for(const DependencyGraph& graph, const ValidationReport& report,
                                   const ActivityName& root);

} // namespace acacd

#endif // ACACD_GRAPH_HPP
