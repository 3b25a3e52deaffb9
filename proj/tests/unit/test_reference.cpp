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

#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "packstab/lattice.hpp"
#include "packstab/reference.hpp"
#include "support.hpp"

using namespace packstab;

namespace {

IntMatrix permutation(const std::vector<std::size_t> &p) {
    IntMatrix m(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m(p[i], i) = 1;
    return m;
}

// D8: integer vectors with even coordinate sum.
IntGram d8_gram() {
    RealMatrix b = RealMatrix::Zero(8, 8);
    b(0, 0) = 2;
    for (Eigen::Index i = 1; i < 8; ++i) {
        b(i - 1, i) = -1;
        b(i, i) = 1;
    }
    IntMatrix g(8, 8);
    RealMatrix gr = b.transpose() * b;
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            g(i, j) = static_cast<long>(std::lround(gr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    return IntGram(g);
}

}  // namespace

TEST_SUITE("reference") {

TEST_CASE("E8 short basis") {
    Lattice e8 = e8_short_basis();
    CHECK(e8.det() == doctest::Approx(1));
    CHECK(e8.max_basis_norm() == doctest::Approx(2));
    for (std::size_t i = 0; i < 8; ++i) {
        long n2 = std::lround(e8.vector(i).squaredNorm());
        CHECK(n2 % 2 == 0);
        CHECK(std::abs(e8.vector(i).squaredNorm() - static_cast<double>(n2)) < 1e-12);
    }
    CHECK(is_even_unimodular(e8_gram()));
}

TEST_CASE("Golay code and Leech lattice") {
    IntMatrix g = golay_generator();
    CHECK(g.rows() == 12);
    CHECK(g.cols() == 24);
    // codewords have weights 0, 8, 12, 16 or 24
    for (int mask = 1; mask < 4096; mask += 37) {
        int weight = 0;
        for (std::size_t c = 0; c < 24; ++c) {
            long bit = 0;
            for (std::size_t r = 0; r < 12; ++r)
                if (mask >> r & 1) bit += g.get_long(r, c);
            weight += static_cast<int>(bit % 2);
        }
        CHECK(weight % 4 == 0);
        CHECK(weight != 4);
    }
    Lattice leech = leech_basis();
    CHECK(leech.det() == doctest::Approx(1).epsilon(1e-9));
    CHECK(leech_gram().det() == 1);
    CHECK(is_even_unimodular(leech_gram()));
    Lattice shortB = leech_short_basis();
    CHECK(shortB.max_basis_norm() == doctest::Approx(2));
    CHECK(leech_short_gram().det() == 1);
}

TEST_CASE("even unimodular test") {
    CHECK(is_even_unimodular(e8_gram()));
    CHECK_FALSE(is_even_unimodular(IntGram(IntMatrix::identity(8))));
    CHECK_FALSE(is_even_unimodular(IntGram(e8_gram().matrix() * 2)));
}

TEST_CASE("identification") {
    CHECK(identify_even_unimodular(e8_gram()).verdict == Verdict::E8);
    testing::Rng rng(31);
    IntGram skew = e8_gram().transformed(testing::random_unimodular(8, rng));
    CHECK(identify_even_unimodular(skew).verdict == Verdict::E8);
    CHECK(identify_even_unimodular(leech_gram()).verdict == Verdict::Leech);
    LatticeIdentity triple = identify_even_unimodular(direct_sum(direct_sum(e8_gram(), e8_gram()), e8_gram()));
    CHECK(triple.verdict == Verdict::OtherEvenUnimodular);
    REQUIRE(triple.witness.has_value());
    IntMatrix w(24, 1);
    for (std::size_t i = 0; i < 24; ++i) w(i, 0) = (*triple.witness)[i];
    IntMatrix g3 = direct_sum(direct_sum(e8_gram(), e8_gram()), e8_gram()).matrix();
    CHECK((w.transpose() * g3 * w)(0, 0) == 2);
    CHECK(identify_even_unimodular(IntGram(IntMatrix::identity(8))).verdict == Verdict::NotEvenUnimodular);
}

TEST_CASE("Gram isometry") {
    IsometryResult self = gram_isometry(e8_gram(), e8_gram());
    REQUIRE(self.outcome == IsometryOutcome::Found);
    CHECK(e8_gram().transformed(*self.transform) == e8_gram());
    std::vector<std::size_t> p(8);
    std::iota(p.begin(), p.end(), 0);
    std::reverse(p.begin(), p.end());
    std::swap(p[2], p[5]);
    IntGram permuted = e8_gram().transformed(permutation(p));
    IsometryResult perm = gram_isometry(e8_gram(), permuted);
    REQUIRE(perm.outcome == IsometryOutcome::Found);
    CHECK(e8_gram().transformed(*perm.transform) == permuted);
    CHECK(is_unimodular(*perm.transform));
    CHECK(d8_gram().det() == 4);
    IsometryResult none = gram_isometry(e8_gram(), d8_gram());
    CHECK(none.outcome == IsometryOutcome::None);
    CHECK(none.nodes == 0);
}

TEST_CASE("Leech isometry against a scrambled basis") {
    testing::Rng rng(77);
    IntMatrix t = testing::random_unimodular(24, rng, 48, 3);
    IntGram raw = leech_short_gram().transformed(t);
    IntGram scrambled = raw.transformed(lll_gram_transform(raw));
    IsometryResult r = gram_isometry(leech_short_gram(), scrambled);
    CHECK(r.outcome != IsometryOutcome::None);
    if (r.outcome == IsometryOutcome::Found) CHECK(leech_short_gram().transformed(*r.transform) == scrambled);
}

TEST_CASE("disjoint rotation") {
    RealMatrix psi = random_disjoint_rotation(8, 5);
    CHECK(orthogonality_defect(psi) < 1e-10);
    CHECK_FALSE(shares_short_vector(psi));
    CHECK(shares_short_vector(RealMatrix::Identity(8, 8)));
    CHECK(random_disjoint_rotation(8, 5).isApprox(psi));
}

TEST_CASE("unimodular basis from vectors") {
    std::vector<std::vector<long>> vecs{{1, 1, 0}, {2, 2, 0}, {0, 1, 0}, {0, 0, 1}};
    auto b = unimodular_basis_from_vectors(vecs, 3);
    REQUIRE(b.has_value());
    CHECK(is_unimodular(*b));
    CHECK_FALSE(unimodular_basis_from_vectors({{2, 0}, {0, 2}}, 2).has_value());
}

}
