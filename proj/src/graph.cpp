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

#include "acacd/graph.hpp"

#include <algorithm>
#include <functional>

namespace acacd {

namespace {

// 0 when a chain edge joins u to v, 1 when only a phase edge does, nullopt
// when they are not adjacent. `phase_from` restricts phase edges to one
// source when set.
std::optional<int> hop_cost(const DependencyGraph& graph, const ActivityName& u, const ActivityName& v,
                            const std::optional<ActivityName>& phase_from = std::nullopt)
{
    std::optional<int> best;
    for (const auto* e : graph.out_edges(u)) {
        if (e->to != v) {
            continue;
        }
        if (!e->is_phase_edge()) {
            return 0;
        }
        if (!phase_from || *phase_from == u) {
            best = 1;
        }
    }
    return best;
}

std::string join(const Cycle& cycle)
{
    std::string out;
    for (const auto& n : cycle) {
        out += n + " -> ";
    }
    return out + (cycle.empty() ? std::string() : cycle.front());
}

} // namespace

DependencyGraph DependencyGraph::build(const PolicyBundle& bundle)
{
    DependencyGraph g;
    for (const auto& request : bundle.requests()) {
        g.add_root(request.activity);
    }
    for (const auto& entry : bundle.dependency_entries()) {
        g.add_root(entry.activity);
        for (auto phase : kAllPhases) {
            for (const auto& spec : entry.phases.of(phase)) {
                g.add_edge(DependencyEdge{entry.activity, spec.activity, spec.desired_state, phase, std::nullopt});
            }
        }
    }
    for (const auto& dod : bundle.dod_entries()) {
        g.add_node(dod.key.activity);
        for (const auto& spec : dod.dependencies) {
            g.add_edge(DependencyEdge{dod.key.activity, spec.activity, spec.desired_state, std::nullopt, dod.key});
        }
    }
    return g;
}

void DependencyGraph::add_node(const ActivityName& name)
{
    nodes_.insert(name);
}

void DependencyGraph::add_root(const ActivityName& name)
{
    nodes_.insert(name);
    roots_.insert(name);
}

void DependencyGraph::add_edge(DependencyEdge edge)
{
    nodes_.insert(edge.from);
    nodes_.insert(edge.to);
    out_.emplace(edge.from, edges_.size());
    edges_.push_back(std::move(edge));
}

std::vector<const DependencyEdge*> DependencyGraph::out_edges(const ActivityName& from) const
{
    std::vector<const DependencyEdge*> out;
    auto [lo, hi] = out_.equal_range(from);
    for (auto it = lo; it != hi; ++it) {
        out.push_back(&edges_[it->second]);
    }
    return out;
}

std::set<ActivityName> DependencyGraph::reach(const ActivityName& root) const
{
    std::set<ActivityName> seen{root};
    std::vector<ActivityName> stack;
    for (const auto* e : out_edges(root)) {
        if (seen.insert(e->to).second) {
            stack.push_back(e->to);
        }
    }
    while (!stack.empty()) {
        auto at = stack.back();
        stack.pop_back();
        for (const auto* e : out_edges(at)) {
            if (!e->is_phase_edge() && seen.insert(e->to).second) {
                stack.push_back(e->to);
            }
        }
    }
    return seen;
}

std::vector<Cycle> detect_cycles(const DependencyGraph& graph)
{
    std::vector<Cycle> cycles;
    std::vector<ActivityName> nodes(graph.nodes().begin(), graph.nodes().end());

    for (const auto& start : nodes) {
        if (auto c = hop_cost(graph, start, start); c && *c <= 1) {
            cycles.push_back({start});
        }
        Cycle path{start};
        std::set<ActivityName> on_path{start};
        std::function<void(const ActivityName&, int)> dfs = [&](const ActivityName& at, int phase_edges) {
            std::set<ActivityName> next;
            for (const auto* e : graph.out_edges(at)) {
                next.insert(e->to);
            }
            for (const auto& v : next) {
                if (v < start || (v != start && on_path.contains(v)) || (v == start && at == start)) {
                    continue;
                }
                auto cost = hop_cost(graph, at, v);
                if (!cost || phase_edges + *cost > 1) {
                    continue;
                }
                if (v == start) {
                    cycles.push_back(path);
                    continue;
                }
                path.push_back(v);
                on_path.insert(v);
                dfs(v, phase_edges + *cost);
                on_path.erase(v);
                path.pop_back();
            }
        };
        dfs(start, 0);
    }
    return cycles;
}

std::string_view to_string(ConflictKind kind) noexcept
{
    return kind == ConflictKind::resolvable ? "resolvable" : "unsatisfiable";
}

std::vector<ConflictWarning> detect_policy_conflicts(const DependencyGraph& graph)
{
    std::vector<ConflictWarning> warnings;
    for (const auto& root : graph.roots()) {
        for (auto phase : kAllPhases) {
            std::map<ActivityName, std::set<ActivityState>> demands;
            std::set<std::pair<ActivityName, ActivityState>> visited;
            std::vector<std::pair<ActivityName, ActivityState>> stack;
            for (const auto* e : graph.out_edges(root)) {
                if (e->phase == phase) {
                    stack.emplace_back(e->to, e->desired);
                }
            }
            while (!stack.empty()) {
                auto [activity, desired] = stack.back();
                stack.pop_back();
                demands[activity].insert(desired);
                if (!visited.emplace(activity, desired).second) {
                    continue;
                }
                for (const auto* e : graph.out_edges(activity)) {
                    if (e->transition && e->transition->desired == desired) {
                        stack.emplace_back(e->to, e->desired);
                    }
                }
            }
            for (const auto& [activity, states] : demands) {
                if (states.size() < 2) {
                    continue;
                }
                ConflictWarning w;
                w.root = root;
                w.phase = phase;
                w.activity = activity;
                w.demanded.assign(states.begin(), states.end());
                bool drains = states.size() == 2 && states.contains(ActivityState::inactive) &&
                              std::any_of(states.begin(), states.end(), [](ActivityState s) { return is_terminal(s); });
                w.kind = drains ? ConflictKind::resolvable : ConflictKind::unsatisfiable;
                warnings.push_back(std::move(w));
            }
        }
    }
    return warnings;
}

bool ValidationReport::clean() const
{
    return cycles.empty() && std::none_of(conflicts.begin(), conflicts.end(), [](const ConflictWarning& w) {
               return w.kind == ConflictKind::unsatisfiable;
           });
}

ValidationReport validate(const DependencyGraph& graph)
{
    return ValidationReport{detect_cycles(graph), detect_policy_conflicts(graph)};
}

std::optional<Refusal> refusal_for(const DependencyGraph& graph, const ValidationReport& report,
                                   const ActivityName& root)
{
    auto reachable = graph.reach(root);
    for (const auto& cycle : report.cycles) {
        bool inside = std::all_of(cycle.begin(), cycle.end(), [&](const auto& n) { return reachable.contains(n); });
        if (!inside) {
            continue;
        }
        bool walkable = true;
        for (std::size_t i = 0; i < cycle.size() && walkable; ++i) {
            walkable = hop_cost(graph, cycle[i], cycle[(i + 1) % cycle.size()], root).has_value();
        }
        if (walkable) {
            return Refusal{Refusal::Kind::cycle, "circular dependency " + join(cycle)};
        }
    }
    for (const auto& w : report.conflicts) {
        if (w.root == root && w.kind == ConflictKind::unsatisfiable) {
            std::string states;
            for (auto s : w.demanded) {
                states += (states.empty() ? "" : ", ") + std::string(to_string(s));
            }
            return Refusal{Refusal::Kind::conflict, "unsatisfiable demands on " + w.activity + " in " +
                                                        std::string(to_string(w.phase)) + " phase: {" + states + "}"};
        }
    }
    return std::nullopt;
}

} // namespace acacd
