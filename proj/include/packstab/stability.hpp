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

#include "packstab/magic.hpp"
#include "packstab/reference.hpp"
#include "packstab/snap.hpp"

namespace packstab {

enum class CertificateStatus { Certified, InvariantProof, VerdictMismatch };
std::string to_string(CertificateStatus s);

struct StabilityCertificate {
    int dim = 8;
    CertificateStatus status = CertificateStatus::VerdictMismatch;
    LatticeIdentity identity;
    RealMatrix reducedBasis;            // LLL output u~
    IntMatrix reductionTransform;       // reducedBasis = input * reductionTransform
    SnapResult snap;
    RealMatrix pairedBasisL;            // u_i of the input lattice
    RealMatrix pairedBasisRef;          // Phi w_i
    std::optional<RealMatrix> isometry; // Phi
    IntMatrix pairingCoefficients;      // pairedBasisL = reducedBasis * pairingCoefficients
    IntMatrix inputCoordinates;         // pairedBasisL = input * inputCoordinates, exact unimodular
    double maxError = 0;
    double inputDeficit = 0;
    double shortestLength = 0;
    bool shortVectorFloorOk = false;
    double certifiedRadius = 0;         // radius up to which the shortest vector search ran
    double maxReducedNorm = 0;
    double log2ReducedNormCeiling = 0;  // 15 (dim 8) or 139 (dim 24)
    double log2TheoreticalCeiling = 0;  // worst-case paired error bound, log2 of the factor on eps
    std::uint64_t isometryNodes = 0;
};

// Throws Status::Regime errors for inputs outside the stability regime.
StabilityCertificate certify_lattice(const Lattice &lat, int dim, const ToleranceParams &params);

struct PairedBasis {
    RealMatrix refShort;      // snapped * coefficients, Gram equal to the reference short Gram
    RealMatrix pairedU;       // originalU * coefficients
    IntMatrix coefficients;
    double coeffBound = 0;
    IsometryOutcome outcome = IsometryOutcome::None;
    std::uint64_t nodes = 0;
};

// Expresses the reference short basis in snapped coordinates. An undecided isometry search
// leaves the coefficients empty and outcome Undecided.
PairedBasis pair_short_basis(const Lattice &snapped, const Lattice &reference, const RealMatrix &originalU,
                             std::uint64_t budget = 0);

}  // namespace packstab
