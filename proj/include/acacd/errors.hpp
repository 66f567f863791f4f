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

#ifndef ACACD_ERRORS_HPP
#define ACACD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace acacd {

// Root of every error the library throws.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IllegalTransition : public Error
{
public:
    IllegalTransition(const std::string& activity, const std::string& from, const std::string& to)
        : Error("illegal transition of '" + activity + "': " + from + " -> " + to),
          from_(from), to_(to)
    {
    }

    const std::string& from() const noexcept { return from_; }
    const std::string& to() const noexcept { return to_; }

private:
    std::string from_;
    std::string to_;
};

class ImmutableActivity : public Error
{
public:
    explicit ImmutableActivity(const std::string& activity)
        : Error("activity '" + activity + "' is immutable"), activity_(activity)
    {
    }

    const std::string& activity() const noexcept { return activity_; }

private:
    std::string activity_;
};

class UnknownState : public Error
{
public:
    explicit UnknownState(const std::string& token)
        : Error("unknown activity state '" + token + "'"), token_(token)
    {
    }

    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

class UnknownActivity : public Error
{
public:
    explicit UnknownActivity(const std::string& activity)
        : Error("unknown activity '" + activity + "'")
    {
    }
};

// Policy loading.

class IoError : public Error
{
public:
    using Error::Error;
};

class PolicyLoadError : public Error
{
public:
    using Error::Error;
};

class ParseError : public PolicyLoadError
{
public:
    ParseError(const std::string& file, const std::string& location, const std::string& what)
        : PolicyLoadError(file + ": " + location + ": " + what), file_(file), location_(location)
    {
    }

    const std::string& file() const noexcept { return file_; }
    const std::string& location() const noexcept { return location_; }

private:
    std::string file_;
    std::string location_;
};

class DanglingReference : public PolicyLoadError
{
public:
    DanglingReference(const std::string& kind, const std::string& name)
        : PolicyLoadError("dangling " + kind + " reference '" + name + "'"), kind_(kind), name_(name)
    {
    }

    const std::string& kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string kind_;
    std::string name_;
};

class DuplicateKey : public PolicyLoadError
{
public:
    explicit DuplicateKey(const std::string& name)
        : PolicyLoadError("duplicate key '" + name + "'"), name_(name)
    {
    }

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

// Policy lookups.

class NoObjectForActivity : public Error
{
public:
    explicit NoObjectForActivity(const std::string& activity)
        : Error("no object mapped for activity '" + activity + "'")
    {
    }
};

class NoOperationForPair : public Error
{
public:
    NoOperationForPair(const std::string& activity, const std::string& object)
        : Error("no operation for activity '" + activity + "' on object '" + object + "'")
    {
    }
};

// Resolution.

class CycleDetected : public Error
{
public:
    using Error::Error;
};

class LockTimeout : public Error
{
public:
    explicit LockTimeout(const std::string& activity)
        : Error("timed out waiting for lock on '" + activity + "'")
    {
    }
};

class PolicyConflict : public Error
{
public:
    using Error::Error;
};

} // namespace acacd

#endif // ACACD_ERRORS_HPP
