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

#include <set>

#include "doctest.h"
#include "packstab/int_gram.hpp"
#include "packstab/reference.hpp"
#include "support.hpp"

using namespace packstab;

TEST_SUITE("linalg") {

TEST_CASE("gram of identity, E8 and scaled bases") {
    CHECK(gram(RealMatrix::Identity(8, 8)).matrix().isApprox(RealMatrix::Identity(8, 8)));
    Lattice e8 = e8_short_basis();
    RealMatrix g = e8.gram_matrix().matrix();
    for (Eigen::Index i = 0; i < 8; ++i) {
        CHECK((g(i, i) == doctest::Approx(2) || g(i, i) == doctest::Approx(4)));
    }
    IntMatrix gi(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) gi(i, j) = static_cast<long>(std::lround(g(i, j)));
    CHECK(bareiss_det(gi) == 1);
    CHECK(gi.to_real().isApprox(g));
    RealMatrix g3 = gram(e8.basis() * 3.0).matrix();
    CHECK((g3 - 9.0 * g).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bareiss determinant") {
    for (std::size_t n : {1u, 3u, 8u, 24u}) CHECK(bareiss_det(IntMatrix::identity(n)) == 1);
    CHECK(bareiss_det(e8_gram().matrix()) == 1);
    CHECK(bareiss_det(leech_gram().matrix()) == 1);
    testing::Rng rng(3);
    std::uniform_int_distribution<long> u(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
        IntMatrix m(4, 4);
        RealMatrix r(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) {
                long v = u(rng);
                m(i, j) = v;
                r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(v);
            }
        CHECK(bareiss_det(m).get_d() == doctest::Approx(r.determinant()).epsilon(1e-9));
    }
}

// Index of the subgroup generated by rows inside Z^2, by counting residues modulo 4.
static std::size_t brute_force_index(const std::vector<std::vector<long>> &rows) {
    std::set<std::pair<long, long>> seen;
    for (long a = -4; a <= 4; ++a)
        for (long b = -4; b <= 4; ++b)
            for (long c = -4; c <= 4; ++c) {
                long x = a * rows[0][0] + b * rows[1][0] + c * rows[2][0];
                long y = a * rows[0][1] + b * rows[1][1] + c * rows[2][1];
                seen.insert({((x % 4) + 4) % 4, ((y % 4) + 4) % 4});
            }
    return 16 / seen.size();
}

TEST_CASE("hermite normal form") {
    CHECK(hnf(IntMatrix::identity(5)) == IntMatrix::identity(5));
    std::vector<std::vector<long>> rows{{2, 0}, {0, 2}, {1, 1}};
    IntMatrix h = hnf(IntMatrix::from_rows(rows));
    CHECK(bareiss_det(h) == static_cast<long>(brute_force_index(rows)));
    CHECK(bareiss_det(h) == 2);
    testing::Rng rng(9);
    IntMatrix b = testing::random_unimodular(4, rng) * 3;
    IntMatrix doubled(8, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) doubled(i, j) = doubled(i + 4, j) = b(j, i);
    CHECK(hnf(doubled) == hnf(b.transpose()));
    for (std::size_t i = 0; i < 4; ++i) CHECK(hnf(doubled)(i, i) > 0);
}

TEST_CASE("cholesky factor") {
    CHECK(cholesky_upper(SymRealMatrix(RealMatrix::Identity(4, 4))).matrix().isApprox(RealMatrix::Identity(4, 4)));
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 4;
    d(1, 1) = 9;
    UpperTriangular u = cholesky_upper(SymRealMatrix(d));
    CHECK(u(0, 0) == doctest::Approx(2));
    CHECK(u(1, 1) == doctest::Approx(3));
    UpperTriangular e = cholesky_upper(SymRealMatrix(e8_gram().to_real()));
    CHECK(e.diagonal_product() == doctest::Approx(1).epsilon(1e-12));
    CHECK((e.matrix().transpose() * e.matrix() - e8_gram().to_real()).cwiseAbs().maxCoeff() < 1e-12);
    RealMatrix bad = RealMatrix::Identity(3, 3);
    bad(2, 2) = -1;
    CHECK_THROWS_AS(cholesky_upper(SymRealMatrix(bad)), NotPositiveDefiniteError);
}

TEST_CASE("orthogonal alignment") {
    RealMatrix id = RealMatrix::Identity(5, 5);
    CHECK(orthogonal_align(id, UpperTriangular(id)).isApprox(id));
    testing::Rng rng(4);
    RealMatrix q = testing::random_orthogonal(6, rng);
    CHECK((orthogonal_align(q, UpperTriangular(RealMatrix::Identity(6, 6))) - q).cwiseAbs().maxCoeff() < 1e-10);
    RealMatrix a = e8_short_basis().basis();
    UpperTriangular u = cholesky_upper(gram(a));
    RealMatrix qa = orthogonal_align(a, u);
    CHECK(orthogonality_defect(qa) < 1e-10);
    CHECK((qa * u.matrix() - a).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("integral solves and unimodularity") {
    testing::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        IntMatrix t = testing::random_unimodular(6, rng);
        CHECK(is_unimodular(t));
        auto inv = unimodular_inverse(t);
        REQUIRE(inv);
        CHECK(t * *inv == IntMatrix::identity(6));
        IntMatrix x = testing::random_unimodular(6, rng);
        auto sol = solve_integral(t, t * x);
        REQUIRE(sol);
        CHECK(*sol == x);
    }
    IntMatrix two = IntMatrix::identity(3) * 2;
    CHECK_FALSE(is_unimodular(two));
    CHECK_FALSE(solve_integral(two, IntMatrix::identity(3)).has_value());
    RealMatrix near = RealMatrix::Identity(2, 2);
    near(0, 1) = 0.05;
    CHECK(round_integral(near, 0.1).has_value());
    CHECK_FALSE(round_integral(near, 0.01).has_value());
}

TEST_CASE("integer Gram construction") {
    CHECK(e8_gram().is_even());
    CHECK(e8_gram().det() == 1);
    IntMatrix m{{1, 2}, {2, 1}};
    try {
        IntGram g(m);
        FAIL("expected a non positive definite error");
    } catch (const NotPositiveDefiniteError &e) {
        CHECK(e.minor() == 2);
    }
    IntGram s = direct_sum(e8_gram(), e8_gram());
    CHECK(s.n() == 16);
    CHECK(s.det() == 1);
}

}
