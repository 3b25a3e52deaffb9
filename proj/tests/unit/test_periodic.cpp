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

#include "doctest.h"
#include "packstab/anchor.hpp"
#include "packstab/generators.hpp"
#include "packstab/snap.hpp"
#include "support.hpp"

using namespace packstab;

namespace {

PeriodicConfig e8_blocks(double noise = 0, std::uint64_t seed = 1) {
    return generate_perturbed_config(e8_short_basis(), 2, noise, 0, seed);
}

AnchorContext context(const PointSource &src) {
    AnchorContext ctx;
    ctx.source = &src;
    ctx.dim = 8;
    ctx.params = make_tolerance_params(1e-3, 8);
    ctx.options = AnchorOptions::for_dim(8);
    return ctx;
}

Window ball(double r) { return Window::ball(RealVector::Zero(8), r); }

bool in_e8(const RealVector &p) {
    RealVector c = coords_in_basis(p, e8_short_basis());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        if (std::abs(c[i] - std::round(c[i])) > 1e-9) return false;
    return true;
}

}  // namespace

TEST_SUITE("periodic") {

TEST_CASE("configurations and the packing condition") {
    PeriodicConfig cfg = e8_blocks();
    CHECK(cfg.size() == 256);
    CHECK(cfg.center_density() == doctest::Approx(1));
    CHECK(min_distance(cfg) == doctest::Approx(std::sqrt(2.0)));
    Lattice period(RealMatrix::Identity(2, 2) * 4);
    std::vector<RealVector> close{RealVector::Zero(2), RealVector::Constant(2, 0.5)};
    try {
        make_periodic_config(period, close, 0.5);
        FAIL("expected a packing violation");
    } catch (const PackingViolationError &e) {
        CHECK(e.distance() == doctest::Approx(std::sqrt(0.5)));
    }
    RealVector far = RealVector::Constant(2, 7.5);
    RealVector reduced = reduce_to_fundamental(period, far);
    CHECK((reduced - RealVector::Constant(2, 3.5)).norm() < 1e-12);
}

TEST_CASE("exact E8 counting agrees with enumeration") {
    testing::Rng rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    Lattice e8 = e8_short_basis();
    for (int trial = 0; trial < 6; ++trial) {
        RealVector shift(8);
        for (Eigen::Index i = 0; i < 8; ++i) shift[i] = u(rng);
        Window b = Window::ball(RealVector::Zero(8), 2.5 + trial * 0.2);
        Window c = Window::cube(RealVector::Constant(8, 0.3 * u(rng)), 1.2 + 0.1 * trial);
        LatticeRegion plainBall(e8, shift, b), plainCube(e8, shift, c);
        std::uint64_t viaBall = 0, viaCube = 0;
        plainBall.for_each_in_window(b, [&](const RealVector &) { ++viaBall; });
        plainCube.for_each_in_window(c, [&](const RealVector &) { ++viaCube; });
        CHECK(count_e8_points(shift, &b, nullptr) == viaBall);
        CHECK(count_e8_points(shift, nullptr, &c) == viaCube);
        CHECK(count_lattice_points(e8, shift, b) == viaBall);
    }
}

TEST_CASE("saturation") {
    SaturationReport full;
    PeriodicConfig cfg = e8_blocks();
    PeriodicConfig same = saturate(cfg, {}, &full);
    CHECK(full.inserted == 0);
    CHECK(same.size() == cfg.size());

    RealVector removed = cfg.cosets[37];
    std::vector<RealVector> rest = cfg.cosets;
    rest.erase(rest.begin() + 37);
    PeriodicConfig holed = make_periodic_config(cfg.period, rest, cfg.radius);
    SaturationReport one;
    PeriodicConfig filled = saturate(holed, {}, &one);
    REQUIRE(one.inserted == 1);
    PeriodicConfig lone = make_periodic_config(cfg.period, {removed}, cfg.radius);
    PeriodicSource loneSource(lone);
    RealVector inserted;
    for (const RealVector &s : filled.cosets) {
        bool known = false;
        for (const RealVector &t : holed.cosets) known |= (s - t).norm() < 1e-12;
        if (!known) inserted = s;
    }
    REQUIRE(inserted.size() == 8);
    CHECK(loneSource.nearest(inserted, one.effectiveSpacing * std::sqrt(8.0)).has_value());

    PeriodicConfig empty;
    empty.period = Lattice(RealMatrix::Identity(8, 8) * 3);
    empty.dim = 8;
    empty.radius = std::sqrt(2.0) / 2;
    SaturationReport many;
    SaturationOptions coarse;
    coarse.gridBudget = 2048;
    PeriodicConfig sat = saturate(empty, coarse, &many);
    verify_packing(sat);
    // covering radius of a saturated packing is below 2r; density at most 1
    double lower = 3.0 * 3 * 3 * 3 * 3 * 3 * 3 * 3 / ball_volume(8, std::sqrt(2.0) + many.slack);
    CHECK(static_cast<double>(many.inserted) >= std::floor(lower));
    CHECK(static_cast<double>(many.inserted) <= 6561);
}

TEST_CASE("bad set") {
    PeriodicConfig cfg = e8_blocks();
    ToleranceParams p = make_tolerance_params(1e-3, 8);
    CHECK(bad_set(cfg, p.normTol, p.searchRadius).empty());
    std::vector<RealVector> moved = cfg.cosets;
    RealVector dir = RealVector::Unit(8, 2);
    moved[5] += 0.2 * dir;
    PeriodicConfig shaken = make_periodic_config(cfg.period, moved, (std::sqrt(2.0) - 0.2) / 2);
    std::vector<std::size_t> bad = bad_set(shaken, p.normTol, p.searchRadius);
    CHECK(std::find(bad.begin(), bad.end(), 5u) != bad.end());
    PeriodicConfig only5 = make_periodic_config(shaken.period, {shaken.cosets[5]}, shaken.radius);
    PeriodicSource near5(only5);
    for (std::size_t i : bad) CHECK(near5.nearest(shaken.cosets[i], p.searchRadius + 1e-9).has_value());
    CHECK_THROWS_AS(bad_set(cfg, 1.0, p.searchRadius), Error);
}

TEST_CASE("anchor frames") {
    PeriodicSource src(e8_blocks());
    AnchorOptions opt = AnchorOptions::for_dim(8);
    AnchorFrame f = anchor_frame(src, RealVector::Zero(8), ball(6), opt);
    CHECK(f.normsOk);
    CHECK(f.detOk);
    CHECK(f.productOk);
    CHECK(f.absDet >= 16 - 1e-9);
    CHECK(f.absDet <= std::exp2(20.0));
    PeriodicSource noisy(e8_blocks(1e-6, 3));
    testing::Rng rng(2);
    std::uniform_real_distribution<double> u(0, 2);
    RealVector a(8);
    for (Eigen::Index i = 0; i < 8; ++i) a[i] = u(rng);
    CHECK(anchor_frame(noisy, a, Window::ball(a, 6), opt).ok());
}

TEST_CASE("patch reconstruction") {
    PeriodicSource exact(e8_blocks());
    AnchorOptions opt = AnchorOptions::for_dim(8);
    PatchReconstruction rec = reconstruct_patch_lattice(exact, RealVector::Zero(8), ball(5), opt);
    CHECK(rec.claimA);
    CHECK(rec.claimB);
    CHECK(rec.claimC);
    CHECK(rec.detL == doctest::Approx(1).epsilon(1e-9));
    CHECK(rec.maxResidual < 1e-9);
    auto k = round_gram(lll_reduce(rec.lattice).gram_matrix(), 1e-6);
    REQUIRE(k);
    CHECK(identify_even_unimodular(*k).verdict == Verdict::E8);

    PeriodicSource noisy(e8_blocks(1e-6, 4));
    PatchReconstruction rn = reconstruct_patch_lattice(noisy, RealVector::Zero(8), ball(5), opt);
    CHECK(rn.detL >= std::exp2(-20.0));
    CHECK(rn.detL <= 1 + 8 / std::sqrt(5.0));

    RealMatrix psi = random_disjoint_rotation(8, 9);
    PeriodicSource rotated(transform_config(e8_blocks(), psi, RealVector::Zero(8)));
    PatchReconstruction rr = reconstruct_patch_lattice(rotated, RealVector::Zero(8), ball(5), opt);
    auto kr = round_gram(lll_reduce(rr.lattice).gram_matrix(), 1e-6);
    REQUIRE(kr);
    CHECK(identify_even_unimodular(*kr).verdict == Verdict::E8);
}

TEST_CASE("anchor analysis on exact E8") {
    PeriodicSource src(e8_blocks());
    AnchorContext ctx = context(src);
    RealVector a = RealVector::Constant(8, 0.3);
    AnchorReport r = analyze_anchor(ctx, a, ball(5));
    CHECK(r.flags.identified);
    CHECK(r.flags.denseEnough);
    CHECK(r.flags.badSetAvoided);
    CHECK(r.hausdorff <= 1e-9);
    CHECK(r.hausdorffExact);
    CHECK(r.gapRatio <= 300 / std::sqrt(5.0));
    CHECK(r.pointCount == r.latticeCount);
}

TEST_CASE("anchor in a hole block of the block example") {
    ExamplePacking ex = generate_example_packing(2, 1);
    PeriodicSource src(ex.config);
    AnchorContext ctx = context(src);
    RealVector a = RealVector::Constant(8, 0.5);
    REQUIRE(ex.label_at(a) == BlockLabel::Hole);
    AnchorReport r = analyze_anchor(ctx, a, ball(5));
    CHECK_FALSE(r.flags.denseEnough);
    CHECK_FALSE(r.flags.all());
}

TEST_CASE("Hausdorff distance") {
    std::vector<RealVector> a{RealVector::Zero(3), RealVector::Unit(3, 0)};
    std::vector<RealVector> b{RealVector::Zero(3)};
    CHECK(hausdorff(a, a) == 0);
    RealVector x(3);
    x << 1, 2, 2;
    CHECK(hausdorff(b, {x}) == doctest::Approx(3));
    CHECK(hausdorff(a, b) == doctest::Approx(1));
    CHECK(hausdorff(b, a) == doctest::Approx(1));
}

TEST_CASE("anchor sampling summary") {
    PeriodicSource src(e8_blocks());
    AnchorContext ctx = context(src);
    AnchorSummary one = sample_anchors(ctx, e8_blocks().period, ball(5), 1, 3);
    CHECK(one.reports.size() == 1);
    CHECK(one.halfWidth == 1);
    CHECK(one.lowConfidence);
    CHECK(one.fraction == 1);
    CHECK(wilson_half_width(0, 0) == 1);
    CHECK(wilson_half_width(20, 20) < 0.1);
    auto s1 = sample_fundamental(e8_blocks().period, 5, 8);
    auto s2 = sample_fundamental(e8_blocks().period, 5, 8);
    for (std::size_t i = 0; i < 5; ++i) CHECK(s1[i] == s2[i]);
}

TEST_CASE("perturbed generator") {
    PeriodicConfig exact = e8_blocks();
    for (const RealVector &s : exact.cosets) CHECK(in_e8(s));
    PeriodicConfig noisy = e8_blocks(1e-6, 5);
    CHECK(min_distance(noisy) >= std::sqrt(2.0) - 2e-6);
    PerturbedReport rep;
    PeriodicConfig thinned = generate_perturbed_config(e8_short_basis(), 2, 0, 0.01, 6, &rep);
    CHECK(thinned.center_density() == doctest::Approx(1 - rep.requestedDeletions / 256.0));
    CHECK(std::abs(thinned.center_density() - 0.99) <= 0.5 / 256 + 1e-12);
    PeriodicConfig again = e8_blocks(1e-6, 5);
    for (std::size_t i = 0; i < again.size(); ++i) CHECK(again.cosets[i] == noisy.cosets[i]);
}

TEST_CASE("block example generator") {
    std::vector<BlockLabel> labels = example_labels(2);
    REQUIRE(labels.size() == 256);
    std::size_t holes = 0;
    for (BlockLabel b : labels) holes += b == BlockLabel::Hole;
    CHECK(holes == 128);
    CHECK(labels[128 + 1] == BlockLabel::E8);
    CHECK(labels[128 + 3] == BlockLabel::PsiE8);
    ExamplePacking ex = generate_example_packing(3, 2);
    CHECK(ex.requestedDeletions == (6561 - 2187) * 2187u);
    CHECK(ex.actualDeletions <= ex.requestedDeletions);
    for (const RealVector &s : ex.config.cosets) {
        BlockLabel label = ex.label_at(s);
        CHECK(label != BlockLabel::Hole);
        std::size_t idx = ex.block_index(s);
        RealVector offset(8);
        std::size_t rest = idx;
        for (Eigen::Index i = 7; i >= 0; --i) {
            offset[i] = 3.0 * static_cast<double>(rest % 3);
            rest /= 3;
        }
        RealVector local = s - offset;
        if (label == BlockLabel::E8) CHECK(in_e8(local));
        if (label == BlockLabel::PsiE8) CHECK(in_e8(ex.psi.transpose() * local));
    }
    CHECK_THROWS_AS(generate_example_packing(7, 1), Error);
}

}
