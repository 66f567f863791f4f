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

#include "acacd/policy.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acacd/errors.hpp"

namespace acacd {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<DependencySpec> kNoDependencies;

constexpr const char* kRequestFile = "request.json";
constexpr const char* kActivityFile = "activity.json";
constexpr const char* kObjectFile = "object.json";
constexpr const char* kOperationFile = "operation.json";
constexpr const char* kDependenciesFile = "activityDependencies.json";
constexpr const char* kDodFile = "dependenciesOfdependencies.json";

std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

// Parses `text`, rejecting repeated keys inside any single JSON object.
Json parse_document(const std::string& file, const std::string& text)
{
    std::vector<std::set<std::string>> open_objects;
    std::optional<std::string> duplicate;
    auto on_event = [&](int /*depth*/, Json::parse_event_t event, Json& parsed) {
        switch (event) {
        case Json::parse_event_t::object_start:
            open_objects.emplace_back();
            break;
        case Json::parse_event_t::object_end:
            if (!open_objects.empty()) {
                open_objects.pop_back();
            }
            break;
        case Json::parse_event_t::key:
            if (!open_objects.empty() && !open_objects.back().insert(parsed.get<std::string>()).second) {
                if (!duplicate) {
                    duplicate = parsed.get<std::string>();
                }
            }
            break;
        default:
            break;
        }
        return true;
    };
    Json doc;
    try {
        doc = Json::parse(text, on_event);
    } catch (const Json::parse_error& e) {
        throw ParseError(file, line_column(text, e.byte), e.what());
    }
    if (duplicate) {
        throw DuplicateKey(*duplicate);
    }
    return doc;
}

std::string location(std::size_t index, std::string_view field = {})
{
    std::string out = "[" + std::to_string(index) + "]";
    if (!field.empty()) {
        out += ".";
        out += field;
    }
    return out;
}

const Json& require(const std::string& file, const Json& obj, const char* field, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(field)) {
        throw ParseError(file, where, std::string("missing field '") + field + "'");
    }
    return obj.at(field);
}

std::string require_string(const std::string& file, const Json& value, const std::string& where)
{
    if (!value.is_string()) {
        throw ParseError(file, where, "expected a string");
    }
    auto s = value.get<std::string>();
    if (s.empty()) {
        throw ParseError(file, where, "empty identifier");
    }
    return s;
}

std::string string_field(const std::string& file, const Json& obj, const char* field, const std::string& where)
{
    auto where_field = where + "." + field;
    return require_string(file, require(file, obj, field, where), where_field);
}

void require_array(const std::string& file, const Json& doc)
{
    if (!doc.is_array()) {
        throw ParseError(file, "document", "expected a JSON array");
    }
}

void require_object(const std::string& file, const Json& doc)
{
    if (!doc.is_object()) {
        throw ParseError(file, "document", "expected a JSON object");
    }
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read policy file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading '" + path.string() + "'");
    }
    return buf.str();
}

} // namespace

std::string_view to_string(Phase phase) noexcept
{
    switch (phase) {
    case Phase::pre: return "pre";
    case Phase::ongoing: return "ongoing";
    case Phase::post: return "post";
    }
    return "?";
}

const std::vector<DependencySpec>& PhaseDependencies::of(Phase phase) const noexcept
{
    switch (phase) {
    case Phase::pre: return pre;
    case Phase::ongoing: return ongoing;
    case Phase::post: return post;
    }
    return pre;
}

BundlePaths BundlePaths::in_directory(const std::filesystem::path& dir)
{
    return BundlePaths{
        dir / kRequestFile,    dir / kActivityFile,     dir / kObjectFile,
        dir / kOperationFile, dir / kDependenciesFile, dir / kDodFile,
    };
}

PolicyBundle PolicyBundle::parse(const PolicyDocuments& docs)
{
    PolicyBundle bundle;

    auto state_of = [](const std::string& file, const Json& value, const std::string& where) {
        if (!value.is_string()) {
            throw ParseError(file, where, "expected a state token");
        }
        return parse_state(value.get<std::string>());
    };
    auto known_activity = [&bundle](const std::string& name) {
        if (!bundle.has_activity(name)) {
            throw DanglingReference("activity", name);
        }
        return name;
    };

    // activity.json
    {
        auto doc = parse_document(kActivityFile, docs.activity);
        require_object(kActivityFile, doc);
        for (const auto& [name, body] : doc.items()) {
            if (name.empty()) {
                throw ParseError(kActivityFile, "document", "empty activity name");
            }
            ActivityInfo info;
            info.initial_state = state_of(kActivityFile, require(kActivityFile, body, "state", name), name + ".state");
            if (body.contains("mutable")) {
                if (!body.at("mutable").is_boolean()) {
                    throw ParseError(kActivityFile, name + ".mutable", "expected a boolean");
                }
                info.is_mutable = body.at("mutable").get<bool>();
            }
            bundle.activity_order_.push_back(name);
            bundle.activities_.emplace(name, info);
        }
    }

    std::set<ObjectId> objects;

    // object.json
    {
        auto doc = parse_document(kObjectFile, docs.object);
        require_object(kObjectFile, doc);
        for (const auto& [name, value] : doc.items()) {
            known_activity(name);
            ObjectId object(require_string(kObjectFile, value, name));
            objects.insert(object);
            bundle.object_of_.emplace(name, std::move(object));
        }
    }

    // operation.json
    {
        auto doc = parse_document(kOperationFile, docs.operation);
        require_array(kOperationFile, doc);
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto& entry = doc[i];
            auto activity = known_activity(string_field(kOperationFile, entry, "activity", location(i)));
            ObjectId object(string_field(kOperationFile, entry, "object", location(i)));
            OperationId operation(string_field(kOperationFile, entry, "operation", location(i)));
            objects.insert(object);
            if (!bundle.operations_.emplace(std::pair{activity, object}, operation).second) {
                throw DuplicateKey(activity + "/" + object.value());
            }
        }
    }
    bundle.objects_.assign(objects.begin(), objects.end());

    auto parse_specs = [&](const std::string& file, const Json& list, const std::string& where) {
        std::vector<DependencySpec> specs;
        if (!list.is_array()) {
            throw ParseError(file, where, "expected an array of dependencies");
        }
        for (std::size_t j = 0; j < list.size(); ++j) {
            auto at = where + location(j);
            DependencySpec spec;
            spec.activity = known_activity(string_field(file, list[j], "activity", at));
            spec.desired_state = state_of(file, require(file, list[j], "desiredState", at), at + ".desiredState");
            specs.push_back(std::move(spec));
        }
        return specs;
    };

    // activityDependencies.json
    {
        auto doc = parse_document(kDependenciesFile, docs.dependencies);
        require_array(kDependenciesFile, doc);
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto& entry = doc[i];
            DependencyEntry dep;
            dep.activity = known_activity(string_field(kDependenciesFile, entry, "activity", location(i)));
            dep.object = ObjectId(string_field(kDependenciesFile, entry, "object", location(i)));
            if (!objects.contains(dep.object)) {
                throw DanglingReference("object", dep.object.value());
            }
            auto phase_list = [&](const char* field) {
                if (!entry.contains(field)) {
                    return std::vector<DependencySpec>{};
                }
                return parse_specs(kDependenciesFile, entry.at(field), location(i, field));
            };
            dep.phases.pre = phase_list("pre");
            dep.phases.ongoing = phase_list("ongoing");
            dep.phases.post = phase_list("post");
            auto key = std::pair{dep.activity, dep.object};
            if (!bundle.dependency_index_.emplace(key, bundle.dependency_entries_.size()).second) {
                throw DuplicateKey(dep.activity + "/" + dep.object.value());
            }
            bundle.dependency_entries_.push_back(std::move(dep));
        }
    }

    // dependenciesOfdependencies.json
    {
        auto doc = parse_document(kDodFile, docs.dependencies_of_dependencies);
        require_array(kDodFile, doc);
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const auto& entry = doc[i];
            DodEntry dod;
            dod.key.activity = known_activity(string_field(kDodFile, entry, "activity", location(i)));
            dod.key.current =
                state_of(kDodFile, require(kDodFile, entry, "currentState", location(i)), location(i, "currentState"));
            dod.key.desired =
                state_of(kDodFile, require(kDodFile, entry, "desiredState", location(i)), location(i, "desiredState"));
            if (dod.key.current == dod.key.desired) {
                throw ParseError(kDodFile, location(i), "currentState and desiredState must differ");
            }
            dod.dependencies =
                parse_specs(kDodFile, require(kDodFile, entry, "dependencies", location(i)), location(i, "dependencies"));
            if (!bundle.dod_index_.emplace(dod.key, bundle.dod_entries_.size()).second) {
                throw DuplicateKey(dod.key.activity + "/" + std::string(to_string(dod.key.current)) + "->" +
                                   std::string(to_string(dod.key.desired)));
            }
            bundle.dod_entries_.push_back(std::move(dod));
        }
    }

    // request.json
    {
        auto doc = parse_document(kRequestFile, docs.request);
        require_array(kRequestFile, doc);
        for (std::size_t i = 0; i < doc.size(); ++i) {
            ActivityRequest request;
            request.source = SourceId(string_field(kRequestFile, doc[i], "source", location(i)));
            request.activity = known_activity(string_field(kRequestFile, doc[i], "activity", location(i)));
            bundle.requests_.push_back(std::move(request));
        }
    }

    return bundle;
}

bool PolicyBundle::has_activity(std::string_view name) const
{
    return activities_.find(name) != activities_.end();
}

const ActivityInfo& PolicyBundle::activity(std::string_view name) const
{
    auto it = activities_.find(name);
    if (it == activities_.end()) {
        throw UnknownActivity(std::string(name));
    }
    return it->second;
}

ObjectId PolicyBundle::get_object(std::string_view activity) const
{
    auto it = object_of_.find(activity);
    if (it == object_of_.end()) {
        throw NoObjectForActivity(std::string(activity));
    }
    return it->second;
}

OperationId PolicyBundle::get_operation(std::string_view activity, const ObjectId& object) const
{
    auto it = operations_.find(std::pair{ActivityName(activity), object});
    if (it == operations_.end()) {
        throw NoOperationForPair(std::string(activity), object.value());
    }
    return it->second;
}

const std::vector<DependencySpec>& PolicyBundle::get_da(std::string_view activity, const ObjectId& object,
                                                        Phase phase) const
{
    auto it = dependency_index_.find(std::pair{ActivityName(activity), object});
    if (it == dependency_index_.end()) {
        return kNoDependencies;
    }
    return dependency_entries_[it->second].phases.of(phase);
}

const std::vector<DependencySpec>& PolicyBundle::get_doda(const TransitionDependencyKey& key) const
{
    auto it = dod_index_.find(key);
    if (it == dod_index_.end()) {
        return kNoDependencies;
    }
    return dod_entries_[it->second].dependencies;
}

std::optional<ActivityState> PolicyBundle::get_desired_doda_state(const TransitionDependencyKey& key,
                                                                  std::string_view doda) const
{
    for (const auto& spec : get_doda(key)) {
        if (spec.activity == doda) {
            return spec.desired_state;
        }
    }
    return std::nullopt;
}

PolicyBundle load_bundle(const BundlePaths& paths)
{
    PolicyDocuments docs;
    docs.request = read_file(paths.request);
    docs.activity = read_file(paths.activity);
    docs.object = read_file(paths.object);
    docs.operation = read_file(paths.operation);
    docs.dependencies = read_file(paths.dependencies);
    docs.dependencies_of_dependencies = read_file(paths.dependencies_of_dependencies);
    return PolicyBundle::parse(docs);
}

} // namespace acacd
