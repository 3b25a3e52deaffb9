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

#include "packstab/stability.hpp"

#include <cmath>

#include "packstab/error.hpp"

namespace packstab {

std::string to_string(CertificateStatus s) {
    switch (s) {
    case CertificateStatus::Certified: return "certified";
    case CertificateStatus::InvariantProof: return "invariant-proof";
    case CertificateStatus::VerdictMismatch: return "verdict-mismatch";
    }
    return "unknown";
}

namespace {

IntGram exact_gram(const Lattice &lat, const char *what) {
    auto g = round_gram(lat.gram_matrix(), 1e-6);
    if (!g) fail(Status::Contract, std::string(what) + ": Gram matrix is not integral");
    return *g;
}

double max_column_distance(const RealMatrix &a, const RealMatrix &b) {
    double m = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) m = std::max(m, (a.col(j) - b.col(j)).norm());
    return m;
}

}  // namespace

PairedBasis pair_short_basis(const Lattice &snapped, const Lattice &reference, const RealMatrix &originalU,
                             std::uint64_t budget) {
    const std::size_t n = snapped.dim();
    require(reference.dim() == n, "pair_short_basis: dimension mismatch");
    require(static_cast<std::size_t>(originalU.cols()) == n, "pair_short_basis: originalU column count mismatch");
    IntGram k = exact_gram(snapped, "pair_short_basis");
    IntGram ref = exact_gram(reference, "pair_short_basis");
    PairedBasis out;
    out.coeffBound = std::ldexp(1.0, n <= 8 ? 15 : 139);
    if (k == ref) {
        out.coefficients = IntMatrix::identity(n);
        out.outcome = IsometryOutcome::Found;
    } else {
        IsometryResult iso = gram_isometry(k, ref, budget);
        out.outcome = iso.outcome;
        out.nodes = iso.nodes;
        if (iso.outcome == IsometryOutcome::None)
            fail(Status::Internal, "pair_short_basis: snapped lattice is not isometric to the reference");
        if (iso.outcome == IsometryOutcome::Undecided) return out;
        out.coefficients = *iso.transform;
    }
    RealMatrix c = out.coefficients.to_real();
    if (c.cwiseAbs().maxCoeff() > out.coeffBound)
        fail(Status::Internal, "pair_short_basis: coefficient bound exceeded");
    out.refShort = snapped.basis() * c;
    out.pairedU = originalU * c;
    return out;
}

StabilityCertificate certify_lattice(const Lattice &lat, int dim, const ToleranceParams &params) {
    require(dim == 8 || dim == 24, "certify_lattice: dimension must be 8 or 24");
    require(static_cast<int>(lat.dim()) == dim, "certify_lattice: lattice dimension does not match");
    require(params.dim == dim, "certify_lattice: tolerance parameters are for another dimension");
    StabilityCertificate cert;
    cert.dim = dim;
    const double floorSq = dim == 8 ? 2.0 : 4.0;

    LllResult red = lll_reduce_with_transform(lat);
    cert.reducedBasis = red.lattice.basis();
    cert.reductionTransform = red.transform;
    cert.maxReducedNorm = red.lattice.max_basis_norm();
    cert.log2ReducedNormCeiling = dim == 8 ? 15 : 139;

    double capSq = cert.maxReducedNorm * cert.maxReducedNorm + 2.0;
    ShortestVector sv = shortest_vector(red.lattice, capSq);
    cert.certifiedRadius = std::sqrt(capSq);
    cert.shortestLength = sv.length;
    cert.shortVectorFloorOk = sv.length * sv.length >= floorSq - params.normTol;
    if (!cert.shortVectorFloorOk) fail(Status::Regime, "not a valid packing at unit scale");

    double det = lat.det();
    cert.inputDeficit = det - 1.0;
    if (det > 1.0 + params.eps) fail(Status::Regime, "density deficit exceeds threshold");
    if (det < std::ldexp(1.0, dim == 8 ? -4 : -24)) fail(Status::Regime, "determinant below the lower bound");
    if (std::log2(cert.maxReducedNorm) > cert.log2ReducedNormCeiling)
        fail(Status::Internal, "reduced basis exceeds the norm ceiling");

    auto k = round_gram(red.lattice.gram_matrix(), 2 * params.normTol);
    if (!k) fail(Status::Regime, "outside stability regime (ε too large)");
    cert.snap = snap_to_integral_gram(cert.reducedBasis, *k);
    cert.identity = identify_even_unimodular(*k);
    cert.log2TheoreticalCeiling = dim == 8 ? 1000 : 15000;

    Verdict expected = dim == 8 ? Verdict::E8 : Verdict::Leech;
    if (cert.identity.verdict != expected) {
        cert.status = CertificateStatus::VerdictMismatch;
        return cert;
    }

    Lattice reference = dim == 8 ? e8_short_basis() : leech_short_basis();
    std::uint64_t budget = dim == 8 ? 0 : static_cast<std::uint64_t>(params.isometryBudget24);
    PairedBasis paired = pair_short_basis(Lattice(cert.snap.snappedBasis), reference, cert.reducedBasis, budget);
    cert.isometryNodes = paired.nodes;
    if (paired.outcome == IsometryOutcome::Undecided) {
        cert.status = CertificateStatus::InvariantProof;
        cert.pairingCoefficients = IntMatrix::identity(lat.dim());
        cert.pairedBasisL = cert.reducedBasis;
        cert.pairedBasisRef = cert.snap.snappedBasis;
    } else {
        cert.status = CertificateStatus::Certified;
        cert.pairingCoefficients = paired.coefficients;
        cert.pairedBasisL = paired.pairedU;
        cert.pairedBasisRef = paired.refShort;
        cert.isometry = paired.refShort * reference.basis().inverse();
    }
    cert.maxError = max_column_distance(cert.pairedBasisL, cert.pairedBasisRef);

    cert.inputCoordinates = red.transform * cert.pairingCoefficients;
    auto coords = round_integral(lat.basis().fullPivLu().solve(cert.pairedBasisL), 1e-6);
    if (!coords || *coords != cert.inputCoordinates || !is_unimodular(*coords))
        fail(Status::Internal, "paired basis does not span the input lattice");
    return cert;
}

}  // namespace packstab
