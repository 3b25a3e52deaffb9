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
#include <limits>

#include "packstab/error.hpp"
#include "packstab/periodic.hpp"

namespace packstab {

RealVector reduce_to_fundamental(const Lattice &period, const RealVector &p) {
    require(static_cast<std::size_t>(p.size()) == period.dim(), "reduce_to_fundamental: dimension mismatch");
    RealVector u = period.basis().fullPivLu().solve(p);
    if (u.minCoeff() >= -1e-12 && u.maxCoeff() < 1 - 1e-12) return p;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        u[i] -= std::floor(u[i]);
        if (u[i] >= 1) u[i] = 0;
    }
    return period.basis() * u;
}

PeriodicConfig make_periodic_config(const Lattice &period, std::vector<RealVector> cosets, double radius) {
    require(radius > 0, "make_periodic_config: radius must be positive");
    PeriodicConfig cfg;
    cfg.period = lll_reduce(period);
    cfg.dim = static_cast<int>(period.dim());
    cfg.radius = radius;
    cfg.cosets.reserve(cosets.size());
    for (RealVector &s : cosets) cfg.cosets.push_back(reduce_to_fundamental(cfg.period, s));
    verify_packing(cfg);
    return cfg;
}

namespace {

// Calls f(i, j, distance) for every pair i <= j and translate with 0 < distance <= reach.
template <class F>
void for_each_close_pair(const PeriodicConfig &cfg, double reach, F &&f) {
    BallEnumerator en(cfg.period.basis());
    for (std::size_t i = 0; i < cfg.cosets.size(); ++i) {
        for (std::size_t j = i; j < cfg.cosets.size(); ++j) {
            RealVector t = -en.coordinates(cfg.cosets[j] - cfg.cosets[i]);
            en.visit(t.data(), reach * reach, [&](const long *, double d2) {
                double d = std::sqrt(d2);
                if (i == j && d < 1e-12) return;
                if (d <= reach) f(i, j, d);
            });
        }
    }
}

}  // namespace

void verify_packing(const PeriodicConfig &cfg) {
    const double need = 2 * cfg.radius * (1 - 1e-12);
    struct Found {
        std::size_t i, j;
        double d;
    };
    std::optional<Found> bad;
    for_each_close_pair(cfg, need, [&](std::size_t i, std::size_t j, double d) {
        if (d < need && (!bad || d < bad->d)) bad = Found{i, j, d};
    });
    if (bad) throw PackingViolationError(bad->i, bad->j, bad->d, "cosets closer than twice the packing radius");
}

double min_distance(const PeriodicConfig &cfg) {
    double best = std::numeric_limits<double>::infinity();
    double reach = 0;
    for (std::size_t k = 0; k < cfg.period.dim(); ++k) reach = std::max(reach, cfg.period.vector(k).norm());
    for_each_close_pair(cfg, reach, [&](std::size_t, std::size_t, double d) { best = std::min(best, d); });
    return best;
}

PeriodicConfig transform_config(const PeriodicConfig &cfg, const RealMatrix &rot, const RealVector &shift) {
    std::vector<RealVector> cosets;
    cosets.reserve(cfg.cosets.size());
    for (const RealVector &s : cfg.cosets) cosets.push_back(rot * s + shift);
    PeriodicConfig out;
    out.period = Lattice(rot * cfg.period.basis());
    out.dim = cfg.dim;
    out.radius = cfg.radius;
    for (RealVector &s : cosets) out.cosets.push_back(reduce_to_fundamental(out.period, s));
    return out;
}

std::vector<std::size_t> bad_set(const PeriodicConfig &cfg, double normTol, double searchRadius) {
    require(searchRadius > 0, "bad_set: search radius must be positive");
    const ShellMode mode = cfg.dim == 24 ? ShellMode::Dim24 : ShellMode::Dim8;
    snap_norm_to_even(1.0, normTol, mode);
    std::vector<char> flagged(cfg.cosets.size(), 0);
    for_each_close_pair(cfg, searchRadius, [&](std::size_t i, std::size_t j, double d) {
        if (!snap_norm_to_even(d * d, normTol, mode)) flagged[i] = flagged[j] = 1;
    });
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < flagged.size(); ++i)
        if (flagged[i]) out.push_back(i);
    return out;
}

double hausdorff(const std::vector<RealVector> &a, const std::vector<RealVector> &b) {
    require(!a.empty() && !b.empty(), "hausdorff: both point sets must be nonempty");
    auto directed = [](const std::vector<RealVector> &x, const std::vector<RealVector> &y) {
        double worst = 0;
        for (const RealVector &p : x) {
            double best = std::numeric_limits<double>::infinity();
            for (const RealVector &q : y) best = std::min(best, (p - q).squaredNorm());
            worst = std::max(worst, best);
        }
        return std::sqrt(worst);
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace packstab
