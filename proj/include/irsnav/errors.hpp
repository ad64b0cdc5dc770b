// SPDX-License-Identifier: Apache-2.0
//
// irsnav - radio-map based robot path planning with intelligent reflecting surfaces
// Copyright (C) 2026 The irsnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSNAV_ERRORS_HPP
#define IRSNAV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace irsnav {

// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BoundsError : public Error {
public:
    using Error::Error;
};

class OutOfRegionError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

/// Thrown when a location lies inside an obstacle footprint.
class InfeasibleLocationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means "not applicable".
class ParseError : public Error {
public:
    ParseError(const std::string &msg, std::size_t line, std::size_t column = 0)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string &msg, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column > 0) out += ", column " + std::to_string(column);
        return out + ": " + msg;
    }

    std::size_t line_;
    std::size_t column_;
};

/// Scenario configuration that violates the schema. Names the offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string &key, const std::string &msg, std::size_t line = 0)
        : Error(format(key, msg, line)), key_(key), line_(line) {}

    const std::string &key() const noexcept { return key_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string &key, const std::string &msg, std::size_t line) {
        std::string out;
        if (line > 0) out = "line " + std::to_string(line) + ": ";
        return out + "'" + key + "': " + msg;
    }

    std::string key_;
    std::size_t line_;
};

/// Machine-readable reasons a path cannot be planned.
enum class PlanFailure { infeasible_start, infeasible_goal, no_path };

inline const char *reason_code(PlanFailure f) {
    switch (f) {
    case PlanFailure::infeasible_start: return "infeasible_start";
    case PlanFailure::infeasible_goal: return "infeasible_goal";
    case PlanFailure::no_path: return "no_path";
    }
    return "unknown";
}

class InfeasiblePlanError : public Error {
public:
    InfeasiblePlanError(PlanFailure reason, const std::string &msg) : Error(msg), reason_(reason) {}

    PlanFailure reason() const noexcept { return reason_; }

private:
    PlanFailure reason_;
};

} // namespace irsnav

#endif // IRSNAV_ERRORS_HPP
