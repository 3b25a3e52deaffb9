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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "packstab/magic.hpp"
#include "packstab/reference.hpp"

using namespace packstab;

TEST_SUITE("magic") {

TEST_CASE("tolerance radius") {
    CHECK(tolerance_radius(std::exp(-100.0)) == doctest::Approx(100 / std::log(100.0)));
    CHECK(tolerance_radius(std::exp(-100.0)) == doctest::Approx(21.7147).epsilon(1e-5));
    double e2 = std::exp(2.0);
    CHECK(tolerance_radius(std::exp(-e2)) == doctest::Approx(e2 / 2));
    double prev = tolerance_radius(1e-30);
    for (double eps = 1e-29; eps < 0.05; eps *= 10) {
        double r = tolerance_radius(eps);
        CHECK(r < prev);
        prev = r;
    }
    CHECK_THROWS(tolerance_radius(0.5));
}

TEST_CASE("alpha bounds") {
    CHECK(alpha8(1, 1) == doctest::Approx(std::exp(5 * std::numbers::pi / 4)));
    CHECK(alpha8(3, 2) == doctest::Approx(2 * alpha8(3, 1)));
    CHECK(alpha8(4, 1) > alpha8(3, 1));
    CHECK(std::log2(alpha24(2, 1)) == doctest::Approx(log2_alpha24(2, 1)));
    CHECK(std::log2(alpha8(2, 1)) == doctest::Approx(log2_alpha8(2, 1)));
    CHECK(log2_alpha24(2, 1) - log2_alpha8(2, 1) == doctest::Approx(std::log2(alpha24(2, 1) / alpha8(2, 1))));
    CHECK_THROWS(alpha8(0.5, 1));
}

TEST_CASE("snapping squared norms to even shells") {
    auto k = snap_norm_to_even(2.0005, 0.001);
    REQUIRE(k);
    CHECK(*k == 1);
    CHECK_FALSE(snap_norm_to_even(3.0, 0.5).has_value());
    CHECK_FALSE(snap_norm_to_even(2.0005, 0.001, ShellMode::Dim24).has_value());
    CHECK(snap_norm_to_even(4.0001, 0.001, ShellMode::Dim24) == 2);
    CHECK_THROWS(snap_norm_to_even(2.0, 1.0));
}

TEST_CASE("dimension 8 model") {
    for (int k = 1; k <= 20; ++k) CHECK(std::abs(model_g8(std::sqrt(2.0 * k))) <= 1e-12);
    CHECK(model_g8(std::sqrt(3.0)) < 0);
    for (double r = std::sqrt(2.0); r <= 10; r += 0.01) CHECK(model_g8(r) <= 0);
    CHECK(sin2_half_pi_square(std::sqrt(2.0)) < 1e-28);
}

TEST_CASE("dimension 24 model") {
    CHECK(model_g24(2) == 0);
    CHECK(std::abs(model_g24(std::sqrt(6.0))) <= 1e-12 * std::abs(model_g24(2.1)) + 1e-300);
    CHECK(model_g24(2.1) < 0);
    CHECK(model_c3() > 0);
}

TEST_CASE("Cohn-Elkies functional") {
    Lattice e8 = e8_short_basis();
    std::vector<RealVector> origin{RealVector::Zero(8)};
    CHECK(cohn_elkies_functional(RadialModel::g8(), e8, origin) == doctest::Approx(1).epsilon(1e-9));
    RadialModel zero;
    zero.evaluator = [](double) { return 0.0; };
    zero.domainFloor = 1;
    CHECK(cohn_elkies_functional(zero, e8, origin, 6.0) == doctest::Approx(1));
    CHECK(cohn_elkies_functional(RadialModel::g8(), e8.scaled(1.01), origin) < 1);
}

TEST_CASE("constants file") {
    MagicConfig cfg = parse_magic_config("# comment\nrho0 = 2^-5\nanchor_count = 7\nwindow_radius = 4.5\n");
    CHECK(cfg.rho0 == std::exp2(-5.0));
    CHECK(cfg.anchorCount == 7);
    CHECK(cfg.windowRadius == 4.5);
    CHECK_THROWS_AS(parse_magic_config("bogus = 1\n"), ParseError);
    MagicConfig shipped = load_magic_config(default_config_path());
    CHECK(shipped.rho0 > 0);
    CHECK(shipped.rho1 > 0);
}

TEST_CASE("tolerance parameters") {
    ToleranceParams p = make_tolerance_params(1e-3, 8);
    CHECK(p.R == doctest::Approx(tolerance_radius(1e-3)));
    CHECK(p.normTol > 0);
    CHECK(p.normTol <= 0.1);
    ToleranceParams q = make_tolerance_params(1e-3, 24);
    CHECK(q.dim == 24);
    CHECK_THROWS(make_tolerance_params(1e-3, 12));
}

}
