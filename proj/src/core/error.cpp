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

#include "packstab/error.hpp"

#include <cstdio>

namespace packstab {

const char *status_name(Status s) {
    switch (s) {
    case Status::Ok: return "ok";
    case Status::Contract: return "contract";
    case Status::Parse: return "parse";
    case Status::Io: return "io";
    case Status::NotPositiveDefinite: return "not-positive-definite";
    case Status::Rank: return "rank";
    case Status::Resource: return "resource";
    case Status::PackingViolation: return "packing-violation";
    case Status::Generation: return "generation";
    case Status::Numeric: return "numeric";
    case Status::Regime: return "regime";
    case Status::Internal: return "internal";
    }
    return "unknown";
}

Error::Error(Status status, const std::string &message) : std::runtime_error(message), status_(status) {}

NotPositiveDefiniteError::NotPositiveDefiniteError(std::size_t minor, const std::string &message)
    : Error(Status::NotPositiveDefinite, message + " (leading minor " + std::to_string(minor) + ")"),
      minor_(minor) {}

static std::string pair_message(std::size_t a, std::size_t b, double d, const std::string &detail) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "not a packing: points %zu and %zu at distance %.17g", a, b, d);
    return detail.empty() ? std::string(buf) : std::string(buf) + " (" + detail + ")";
}

PackingViolationError::PackingViolationError(std::size_t first, std::size_t second, double distance,
                                             const std::string &detail)
    : Error(Status::PackingViolation, pair_message(first, second, distance, detail)),
      first_(first), second_(second), distance_(distance) {}

ParseError::ParseError(std::size_t line, const std::string &message)
    : Error(Status::Parse, "line " + std::to_string(line) + ": " + message), line_(line) {}

void fail(Status status, const std::string &message) { throw Error(status, message); }

}  // namespace packstab
