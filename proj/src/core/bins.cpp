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

#include "packstab/bins.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

#include "packstab/error.hpp"
#include "packstab/reference.hpp"

namespace packstab {

DenseBinPacking dense_bin_packing(const Window &container, int dim, std::uint64_t seed, std::uint64_t materializeBudget) {
    require(dim == 8 || dim == 24, "dense_bin_packing: dimension must be 8 or 24");
    require(static_cast<int>(container.dim()) == dim, "dense_bin_packing: dimension mismatch");
    const double r = container.inradius();
    require(r >= (dim == 8 ? 16 : 48), "dense_bin_packing: container inradius too small");
    DenseBinPacking out;
    Window c0 = container;
    if (c0.shape == WindowShape::Ball) c0.radius *= 1 - 1 / r;
    else c0.halfWidths *= 1 - 1 / r;
    out.shrunk = c0;
    out.containerVolume = container.volume();
    out.lowerBound = (1 - (dim == 8 ? 8.0 : 24.0) / r) * out.containerVolume;
    out.upperBound = finite_packing_count_bound(container, dim);
    Lattice ref = dim == 8 ? e8_short_basis() : leech_basis();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&] {
        RealVector u(static_cast<Eigen::Index>(dim));
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = unit(rng);
        return RealVector(ref.basis() * u);
    };
    std::uint64_t best = 0;
    RealVector bestShift;
    const std::size_t firstRound = 64, cap = 1024;
    for (std::size_t k = 0; k < cap; ++k) {
        RealVector x = draw();
        LatticeRegion region(ref, x, c0, dim == 8);
        std::uint64_t cnt = region.count();
        ++out.samples;
        if (k == 0 || cnt > best) {
            best = cnt;
            bestShift = x;
        }
        if (out.samples >= firstRound && static_cast<double>(best) >= out.lowerBound) break;
    }
    if (static_cast<double>(best) < out.lowerBound)
        fail(Status::Generation, "dense_bin_packing: no shift reached the density lower bound");
    if (static_cast<double>(best) > out.upperBound)
        fail(Status::Internal, "dense_bin_packing: count exceeds the finite packing bound");
    out.shift = bestShift;
    out.count = best;
    out.points = std::make_shared<LatticeRegion>(ref, bestShift, c0, dim == 8);
    if (best <= materializeBudget) out.materialized = out.points->collect(c0);
    return out;
}

namespace {

// Centers of the grid cubes of the given edge lying inside the container; the grid has a cube centered
// at the container center.
std::vector<RealVector> cube_centers(const Window &container, double edge) {
    const std::size_t n = container.dim();
    const double half = edge / 2;
    std::vector<RealVector> out;
    if (container.shape == WindowShape::Box) {
        std::vector<long> lim(n);
        for (std::size_t i = 0; i < n; ++i)
            lim[i] = static_cast<long>(std::floor((container.halfWidths[static_cast<Eigen::Index>(i)] - half) / edge + 1e-12));
        for (long l : lim)
            if (l < 0) return out;
        std::vector<long> k(n);
        for (std::size_t i = 0; i < n; ++i) k[i] = -lim[i];
        while (true) {
            RealVector c = container.center;
            for (std::size_t i = 0; i < n; ++i) c[static_cast<Eigen::Index>(i)] += static_cast<double>(k[i]) * edge;
            out.push_back(c);
            std::size_t d = 0;
            while (d < n && ++k[d] > lim[d]) {
                k[d] = -lim[d];
                ++d;
            }
            if (d == n) break;
        }
        return out;
    }
    const double r2 = container.radius * container.radius;
    const long reach = static_cast<long>(std::floor(container.radius / edge)) + 1;
    // farthest-corner contribution of a coordinate at offset k
    auto far = [&](long k) {
        double f = std::abs(static_cast<double>(k)) * edge + half;
        return f * f;
    };
    const double minFar = half * half;
    std::vector<long> k(n, 0);
    std::vector<double> partial(n + 1, 0.0);
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
        if (depth == n) {
            RealVector c = container.center;
            for (std::size_t i = 0; i < n; ++i) c[static_cast<Eigen::Index>(i)] += static_cast<double>(k[i]) * edge;
            out.push_back(c);
            return;
        }
        const double rest = minFar * static_cast<double>(n - depth - 1);
        for (long v = -reach; v <= reach; ++v) {
            double p = partial[depth] + far(v);
            if (p + rest > r2) continue;
            k[depth] = v;
            partial[depth + 1] = p;
            rec(depth + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace

BinTilingReport bin_tiling_analysis(const PointSource &points, const Window &container, double eps,
                                    const ToleranceParams &params, const BinTilingOptions &opt) {
    require(eps > 0 && eps < 1, "bin_tiling_analysis: eps must lie in (0, 1)");
    require(points.dim() == container.dim() || points.dim() == 0, "bin_tiling_analysis: dimension mismatch");
    const std::size_t n = container.dim();
    BinTilingReport rep;
    double edge = opt.cubeEdge > 0 ? opt.cubeEdge : std::min(1 / eps, container.inradius() / 4);
    require(container.inradius() >= 4 * edge * (1 - 1e-12), "bin_tiling_analysis: container inradius below four cube edges");
    rep.cubeEdge = edge;
    rep.threshold = (1 - std::sqrt(eps)) * std::pow(edge, static_cast<double>(n));
    for (const RealVector &c : cube_centers(container, edge)) {
        CubeVerdict v;
        v.center = c;
        v.count = points.dim() == 0 ? 0 : points.count_in_window(Window::cube(c, edge / 2));
        v.regular = static_cast<double>(v.count) >= rep.threshold;
        if (v.regular) ++rep.regular;
        rep.cubes.push_back(std::move(v));
    }
    rep.regularFraction = rep.cubes.empty() ? 0 : static_cast<double>(rep.regular) / static_cast<double>(rep.cubes.size());
    const double room = edge / 2 - opt.windowRadius;
    if (room <= 0 || opt.maxAnalyzedCubes == 0 || points.dim() == 0) return rep;
    std::vector<std::size_t> regularIdx;
    for (std::size_t i = 0; i < rep.cubes.size(); ++i)
        if (rep.cubes[i].regular) regularIdx.push_back(i);
    std::mt19937_64 rng(opt.seed);
    std::shuffle(regularIdx.begin(), regularIdx.end(), rng);
    if (regularIdx.size() > opt.maxAnalyzedCubes) regularIdx.resize(opt.maxAnalyzedCubes);
    std::sort(regularIdx.begin(), regularIdx.end());
    AnchorContext ctx;
    ctx.source = &points;
    ctx.dim = opt.dim;
    ctx.params = params;
    ctx.options = AnchorOptions::for_dim(opt.dim);
    Window k = Window::ball(RealVector::Zero(static_cast<Eigen::Index>(n)), opt.windowRadius);
    for (std::size_t i : regularIdx) {
        CubeVerdict &v = rep.cubes[i];
        // anchors whose windows fit inside the cube; the periodized cube agrees with the source there
        Window region = Window::cube(v.center, room);
        auto anchors = sample_box(region, opt.anchorsPerCube, opt.seed + i);
        v.analysis = analyze_anchors(ctx, anchors, k);
        ++rep.analyzed;
        rep.analyzedSuccesses += v.analysis->successes;
        rep.analyzedAnchors += anchors.size();
    }
    return rep;
}

}  // namespace packstab
