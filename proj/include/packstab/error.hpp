/*
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

   http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace packstab {

enum class Status {
    Ok = 0,
    Contract,
    Parse,
    Io,
    NotPositiveDefinite,
    Rank,
    Resource,
    PackingViolation,
    Generation,
    Numeric,
    Regime,
    Internal
};

const char *status_name(Status s);

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string &message);
    Status status() const noexcept { return status_; }

private:
    Status status_;
};

class NotPositiveDefiniteError : public Error {
public:
    NotPositiveDefiniteError(std::size_t minor, const std::string &message);
    // 1-based index of the first leading minor that is not positive
    std::size_t minor() const noexcept { return minor_; }

private:
    std::size_t minor_;
};

class PackingViolationError : public Error {
public:
    PackingViolationError(std::size_t first, std::size_t second, double distance, const std::string &detail = {});
    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }
    double distance() const noexcept { return distance_; }

private:
    std::size_t first_, second_;
    double distance_;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string &message);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

[[noreturn]] void fail(Status status, const std::string &message);

inline void require(bool condition, const std::string &message) {
    if (!condition) fail(Status::Contract, message);
}

}  // namespace packstab
