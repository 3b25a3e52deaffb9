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

#include <optional>
#include <string>

#include "json.hpp"
#include "packstab/anchor.hpp"
#include "packstab/bins.hpp"
#include "packstab/stability.hpp"

namespace packstab {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

std::string sha256_hex(const std::string &data);

Json vector_json(const RealVector &v);
// One array per column (basis vector).
Json columns_json(const RealMatrix &m);
Json int_matrix_json(const IntMatrix &m);
Json tolerance_json(const ToleranceParams &p);
Json identity_json(const LatticeIdentity &id);
Json certificate_json(const StabilityCertificate &c);
Json anchor_json(const AnchorReport &r);
Json summary_json(const AnchorSummary &s);
Json bin_packing_json(const DenseBinPacking &b);
Json tiling_json(const BinTilingReport &t);

// Envelope shared by every command: command, schema version, input digests, parameters, results, seed.
Json make_report(const std::string &command, const Json &inputs, const Json &parameters, const Json &results,
                 std::optional<long> seed = std::nullopt);
std::string dump_report(const Json &report);

}  // namespace packstab
