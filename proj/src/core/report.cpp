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

#include "packstab/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>

#include "packstab/error.hpp"

namespace packstab {

std::string sha256_hex(const std::string &data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        fail(Status::Internal, "sha256 digest failed");
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

Json vector_json(const RealVector &v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Json columns_json(const RealMatrix &m) {
    Json a = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) a.push_back(vector_json(m.col(j)));
    return a;
}

Json int_matrix_json(const IntMatrix &m) {
    Json a = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Json col = Json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const mpz_class &v = m(i, j);
            if (v.fits_slong_p()) col.push_back(v.get_si());
            else col.push_back(v.get_str());
        }
        a.push_back(col);
    }
    return a;
}

static Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json tolerance_json(const ToleranceParams &p) {
    return Json{{"dim", p.dim},
                {"eps", p.eps},
                {"R", p.R},
                {"alphaLog2", p.alphaLog2},
                {"normTolLog2", p.normTolLog2},
                {"normTol", p.normTol},
                {"rho0", p.rho0},
                {"rho1", p.rho1},
                {"epsGate", p.epsGate},
                {"patchSnapTol", p.patchSnapTol},
                {"minDensityFraction", p.minDensityFraction},
                {"searchRadius", p.searchRadius}};
}

Json identity_json(const LatticeIdentity &id) {
    Json j{{"verdict", to_string(id.verdict)}, {"evidence", id.evidence}};
    if (id.witness) j["witness"] = *id.witness;
    return j;
}

Json certificate_json(const StabilityCertificate &c) {
    Json j{{"dim", c.dim},
           {"status", to_string(c.status)},
           {"identity", identity_json(c.identity)},
           {"maxError", c.maxError},
           {"inputDeficit", c.inputDeficit},
           {"shortestLength", c.shortestLength},
           {"shortVectorFloorOk", c.shortVectorFloorOk},
           {"certifiedRadius", c.certifiedRadius},
           {"maxReducedNorm", c.maxReducedNorm},
           {"log2ReducedNormCeiling", c.log2ReducedNormCeiling},
           {"log2TheoreticalCeiling", c.log2TheoreticalCeiling},
           {"snap",
            {{"maxDisplacement", c.snap.maxDisplacement},
             {"certifiedBound", finite_or_null(c.snap.certifiedBound)},
             {"log2Gamma", log2_gamma_M(static_cast<int>(c.snap.snappedBasis.cols()), c.snap.normBound)},
             {"gramDeviation", c.snap.gramDeviation},
             {"normBound", c.snap.normBound},
             {"targetGram", int_matrix_json(c.snap.targetGram.matrix())}}},
           {"isometryNodes", c.isometryNodes},
           {"pairedBasisL", columns_json(c.pairedBasisL)},
           {"pairedBasisRef", columns_json(c.pairedBasisRef)},
           {"inputCoordinates", int_matrix_json(c.inputCoordinates)}};
    if (c.isometry) j["isometry"] = columns_json(*c.isometry);
    return j;
}

Json anchor_json(const AnchorReport &r) {
    Json frame = Json::array();
    for (const RealVector &v : r.frame) frame.push_back(vector_json(v));
    Json j{{"anchor", vector_json(r.anchor)},
           {"frame", frame},
           {"frameOk", r.frameOk},
           {"identity", identity_json(r.recoveredIdentity)},
           {"hausdorff", finite_or_null(r.hausdorff)},
           {"hausdorffExact", r.hausdorffExact},
           {"gapRatio", finite_or_null(r.gapRatio)},
           {"pointCount", r.pointCount},
           {"latticeCount", r.latticeCount},
           {"windowVolume", r.windowVolume},
           {"densityThreshold", r.densityThreshold},
           {"claims", {{"A", r.claimA}, {"B", r.claimB}, {"C", r.claimC}}},
           {"flags",
            {{"denseEnough", r.flags.denseEnough},
             {"badSetAvoided", r.flags.badSetAvoided},
             {"identified", r.flags.identified}}},
           {"matchedStored", r.matchedStored},
           {"matchedCount", r.matchedZ.size()}};
    if (r.recoveredLattice) j["recoveredBasis"] = columns_json(r.recoveredLattice->basis());
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

Json summary_json(const AnchorSummary &s) {
    Json reports = Json::array();
    for (const AnchorReport &r : s.reports) reports.push_back(anchor_json(r));
    return Json{{"anchors", s.reports.size()},
                {"successes", s.successes},
                {"successFraction", s.fraction},
                {"halfWidth95", s.halfWidth},
                {"lowConfidence", s.lowConfidence},
                {"medianHausdorff", s.medianHausdorff},
                {"medianGapRatio", s.medianGapRatio},
                {"reports", reports}};
}

Json bin_packing_json(const DenseBinPacking &b) {
    return Json{{"count", b.count},
                {"containerVolume", b.containerVolume},
                {"lowerBound", b.lowerBound},
                {"upperBound", b.upperBound},
                {"samples", b.samples},
                {"shift", vector_json(b.shift)},
                {"materialized", b.materialized.size()}};
}

Json tiling_json(const BinTilingReport &t) {
    return Json{{"cubeEdge", t.cubeEdge},
                {"threshold", t.threshold},
                {"cubes", t.cubes.size()},
                {"regular", t.regular},
                {"regularFraction", t.regularFraction},
                {"analyzedCubes", t.analyzed},
                {"analyzedAnchors", t.analyzedAnchors},
                {"analyzedSuccesses", t.analyzedSuccesses}};
}

Json make_report(const std::string &command, const Json &inputs, const Json &parameters, const Json &results,
                 std::optional<long> seed) {
    Json j{{"schemaVersion", kReportSchemaVersion},
           {"command", command},
           {"inputs", inputs},
           {"parameters", parameters},
           {"results", results}};
    if (seed) j["seed"] = *seed;
    return j;
}

std::string dump_report(const Json &report) { return report.dump(2) + "\n"; }

}  // namespace packstab
