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

#include "doctest.h"
#include "packstab/stability.hpp"
#include "support.hpp"

using namespace packstab;

namespace {

std::string regime_message(const Lattice &lat, int dim) {
    try {
        certify_lattice(lat, dim, make_tolerance_params(1e-3, dim));
    } catch (const Error &e) {
        CHECK(e.status() == Status::Regime);
        return e.what();
    }
    return {};
}

void check_pairing(const StabilityCertificate &c, const Lattice &input) {
    REQUIRE(c.isometry.has_value());
    CHECK(orthogonality_defect(*c.isometry) < 1e-6);
    CHECK(is_unimodular(c.inputCoordinates));
    CHECK((input.basis() * c.inputCoordinates.to_real() - c.pairedBasisL).cwiseAbs().maxCoeff() < 1e-9);
    double worst = 0;
    for (Eigen::Index i = 0; i < c.pairedBasisL.cols(); ++i)
        worst = std::max(worst, (c.pairedBasisL.col(i) - c.pairedBasisRef.col(i)).norm());
    CHECK(worst == doctest::Approx(c.maxError).epsilon(1e-9));
}

}  // namespace

TEST_SUITE("stability") {

TEST_CASE("exact E8") {
    Lattice e8 = e8_short_basis();
    StabilityCertificate c = certify_lattice(e8, 8, make_tolerance_params(1e-3, 8));
    CHECK(c.status == CertificateStatus::Certified);
    CHECK(c.identity.verdict == Verdict::E8);
    CHECK(c.maxError <= 1e-10);
    CHECK(c.inputDeficit == 0);
    CHECK(c.shortVectorFloorOk);
    check_pairing(c, e8);
}

TEST_CASE("noisy rotated E8") {
    testing::Rng rng(40);
    for (int trial = 0; trial < 5; ++trial) {
        Lattice lat = testing::noisy_copy(e8_short_basis(), 1e-7, rng);
        StabilityCertificate c = certify_lattice(lat, 8, make_tolerance_params(1e-3, 8));
        CHECK(c.status == CertificateStatus::Certified);
        CHECK(c.identity.verdict == Verdict::E8);
        CHECK(c.maxError <= 1e-4);
        CHECK(std::abs(lat.det() - 1) <= 1e-5);
        check_pairing(c, lat);
    }
}

TEST_CASE("noisy Leech") {
    testing::Rng rng(41);
    Lattice lat = testing::noisy_copy(leech_short_basis(), 1e-8, rng);
    StabilityCertificate c = certify_lattice(lat, 24, make_tolerance_params(1e-3, 24));
    CHECK(c.identity.verdict == Verdict::Leech);
    CHECK(c.shortVectorFloorOk);
    CHECK(c.status != CertificateStatus::VerdictMismatch);
    if (c.status == CertificateStatus::Certified) {
        CHECK(c.maxError <= 1e-4);
        check_pairing(c, lat);
    }
}

TEST_CASE("regime failures") {
    Lattice e8 = e8_short_basis();
    CHECK(regime_message(e8.scaled(1.2), 8).find("density deficit exceeds threshold") != std::string::npos);
    CHECK(regime_message(e8.scaled(0.5), 8).find("not a valid packing") != std::string::npos);
    RealMatrix b = e8.basis();
    b(0, 1) += 0.3;
    CHECK_FALSE(regime_message(Lattice(b), 8).empty());
    CHECK_THROWS(certify_lattice(e8, 24, make_tolerance_params(1e-3, 24)));
}

TEST_CASE("another even unimodular lattice is out of regime in dimension 24") {
    RealMatrix b = RealMatrix::Zero(24, 24);
    for (int k = 0; k < 3; ++k) b.block(8 * k, 8 * k, 8, 8) = e8_short_basis().basis();
    CHECK(regime_message(Lattice(b), 24).find("not a valid packing") != std::string::npos);
    IntGram g3 = direct_sum(direct_sum(e8_gram(), e8_gram()), e8_gram());
    CHECK(identify_even_unimodular(g3).verdict == Verdict::OtherEvenUnimodular);
}

TEST_CASE("pairing the short basis") {
    Lattice e8 = e8_short_basis();
    PairedBasis same = pair_short_basis(e8, e8, e8.basis());
    CHECK(same.coefficients == IntMatrix::identity(8));
    IntMatrix perm(8, 8);
    const std::size_t order[8] = {3, 0, 7, 1, 6, 2, 5, 4};
    for (std::size_t i = 0; i < 8; ++i) perm(order[i], i) = 1;
    Lattice permuted = e8.with_basis_change(perm);
    PairedBasis p = pair_short_basis(permuted, e8, permuted.basis());
    REQUIRE(p.outcome == IsometryOutcome::Found);
    CHECK((permuted.basis() * p.coefficients.to_real() - p.refShort).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((gram(p.refShort).matrix() - e8.gram_matrix().matrix()).cwiseAbs().maxCoeff() < 1e-12);
    testing::Rng rng(3);
    IntMatrix t = testing::random_unimodular(8, rng);
    Lattice longB = e8.with_basis_change(t);
    PairedBasis q = pair_short_basis(longB, e8, longB.basis());
    REQUIRE(q.outcome == IsometryOutcome::Found);
    CHECK(is_unimodular(q.coefficients));
    CHECK((gram(q.refShort).matrix() - e8.gram_matrix().matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(q.coefficients.max_abs() <= mpz_class(static_cast<long>(q.coeffBound)));
}

}
