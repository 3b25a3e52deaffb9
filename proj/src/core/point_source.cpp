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
#include <cmath>
#include <limits>

#include "packstab/error.hpp"
#include "packstab/periodic.hpp"

namespace packstab {

void PointSource::for_each_in_window(const Window &w, const PointVisitor &f) const {
    for_each_in_ball(w.center, w.circumradius(), [&](const RealVector &p) {
        if (w.contains(p)) f(p);
    });
}

std::uint64_t PointSource::count_in_window(const Window &w) const {
    std::uint64_t n = 0;
    for_each_in_window(w, [&](const RealVector &) { ++n; });
    return n;
}

std::optional<RealVector> PointSource::nearest(const RealVector &c, double maxDist) const {
    std::optional<RealVector> best;
    double bestSq = std::numeric_limits<double>::infinity();
    for_each_in_ball(c, maxDist, [&](const RealVector &p) {
        double d = (p - c).squaredNorm();
        if (d < bestSq) {
            bestSq = d;
            best = p;
        }
    });
    return best;
}

std::optional<RealVector> PointSource::nearest_in_window(const RealVector &c, double maxDist, const Window &w) const {
    std::optional<RealVector> best;
    double bestSq = std::numeric_limits<double>::infinity();
    for_each_in_ball(c, maxDist, [&](const RealVector &p) {
        if (!w.contains(p)) return;
        double d = (p - c).squaredNorm();
        if (d < bestSq) {
            bestSq = d;
            best = p;
        }
    });
    return best;
}

std::vector<RealVector> PointSource::collect(const Window &w) const {
    std::vector<RealVector> out;
    for_each_in_window(w, [&](const RealVector &p) { out.push_back(p); });
    return out;
}

PeriodicSource::PeriodicSource(const PeriodicConfig &cfg) : PeriodicSource(cfg, {}) {
    indices_.resize(cfg_.cosets.size());
    for (std::size_t i = 0; i < indices_.size(); ++i) indices_[i] = i;
}

PeriodicSource::PeriodicSource(const PeriodicConfig &cfg, std::vector<std::size_t> cosetIndices)
    : cfg_(cfg), indices_(std::move(cosetIndices)), enumerator_(cfg.period.basis()) {
    for (std::size_t i : indices_) require(i < cfg_.cosets.size(), "PeriodicSource: coset index out of range");
}

void PeriodicSource::for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const {
    const std::size_t n = dim();
    RealVector p(n);
    double *pd = p.data();
    const double r2 = r * r;
    for (std::size_t idx : indices_) {
        const RealVector &s = cfg_.cosets[idx];
        RealVector t = enumerator_.coordinates(c - s);
        enumerator_.visit_points(t.data(), r2, s.data(), [&](const long *, const double *q, double) {
            double d2 = 0;
            for (std::size_t k = 0; k < n; ++k) {
                pd[k] = q[k];
                double e = q[k] - c[static_cast<Eigen::Index>(k)];
                d2 += e * e;
            }
            if (d2 <= r2) f(p);
        });
    }
}

std::uint64_t PeriodicSource::count_in_window(const Window &w) const {
    if (w.shape != WindowShape::Ball) return PointSource::count_in_window(w);
    std::uint64_t total = 0;
    for (std::size_t idx : indices_) {
        RealVector t = enumerator_.coordinates(w.center - cfg_.cosets[idx]);
        total += enumerator_.count(t.data(), w.radius * w.radius);
    }
    return total;
}

FinitePointSet::FinitePointSet(std::vector<RealVector> points) : points_(std::move(points)) {
    dim_ = points_.empty() ? 0 : static_cast<std::size_t>(points_.front().size());
    for (const RealVector &p : points_)
        require(static_cast<std::size_t>(p.size()) == dim_, "FinitePointSet: inconsistent point dimensions");
}

void FinitePointSet::for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const {
    for (const RealVector &p : points_)
        if ((p - c).squaredNorm() <= r * r) f(p);
}

LatticeRegion::LatticeRegion(const Lattice &lat, RealVector shift, Window region, bool standardE8)
    : lat_(lat), shift_(std::move(shift)), region_(std::move(region)), standardE8_(standardE8),
      enumerator_(lll_reduce(lat).basis()) {
    require(region_.dim() == lat_.dim() && static_cast<std::size_t>(shift_.size()) == lat_.dim(),
            "LatticeRegion: dimension mismatch");
}

void LatticeRegion::for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const {
    const RealMatrix &b = enumerator_.basis();
    const std::size_t n = dim();
    RealVector t = enumerator_.coordinates(c + shift_);
    RealVector p(n);
    enumerator_.visit(t.data(), r * r, [&](const long *x, double) {
        p = -shift_;
        for (std::size_t i = 0; i < n; ++i)
            if (x[i]) p += static_cast<double>(x[i]) * b.col(static_cast<Eigen::Index>(i));
        if ((p - c).squaredNorm() <= r * r && region_.contains(p)) f(p);
    });
}

void LatticeRegion::for_each_in_window(const Window &w, const PointVisitor &f) const {
    for_each_in_ball(w.center, w.circumradius(), [&](const RealVector &p) {
        if (w.contains(p)) f(p);
    });
}

static bool window_inside(const Window &inner, const Window &outer) {
    if (inner.shape == WindowShape::Ball) return outer.contains_ball(inner.center, inner.radius);
    if (outer.shape == WindowShape::Ball) {
        RealVector far = (inner.center - outer.center).cwiseAbs() + inner.halfWidths;
        return far.norm() <= outer.radius;
    }
    for (Eigen::Index i = 0; i < inner.center.size(); ++i)
        if (std::abs(inner.center[i] - outer.center[i]) + inner.halfWidths[i] > outer.halfWidths[i]) return false;
    return true;
}

std::uint64_t LatticeRegion::count_in_window(const Window &w) const {
    if (standardE8_) {
        const Window *ball = nullptr, *box = nullptr;
        Window inner = w;
        bool nested = window_inside(w, region_) || window_inside(region_, w);
        if (window_inside(region_, w)) inner = region_;
        if (nested) {
            (inner.shape == WindowShape::Ball ? ball : box) = &inner;
            return count_e8_points(shift_, ball, box);
        }
        if (w.shape != region_.shape) {
            ball = w.shape == WindowShape::Ball ? &w : &region_;
            box = w.shape == WindowShape::Box ? &w : &region_;
            return count_e8_points(shift_, ball, box);
        }
    } else if (window_inside(w, region_) && w.shape == WindowShape::Ball) {
        RealVector t = enumerator_.coordinates(w.center + shift_);
        return enumerator_.count(t.data(), w.radius * w.radius);
    }
    return PointSource::count_in_window(w);
}

std::uint64_t count_lattice_points(const Lattice &lat, const RealVector &shift, const Window &w) {
    LatticeRegion region(lat, shift, w);
    return region.count();
}

namespace {

struct HalfEntry {
    double distSq;
    int parity;
};

// Tuples of coordinates (offset + k_i) for the given index range, with partial squared distance to c
// bounded by radiusSq; parity of sum k_i recorded.
std::vector<HalfEntry> half_tuples(const std::vector<std::pair<long, long>> &ranges, const RealVector &c, double offset,
                                   std::size_t first, std::size_t last, double radiusSq) {
    std::vector<HalfEntry> out;
    std::vector<long> k(last - first);
    std::vector<double> partial(last - first + 1, 0.0);
    std::size_t depth = 0;
    const std::size_t m = last - first;
    k[0] = ranges[first].first - 1;
    while (true) {
        ++k[depth];
        if (k[depth] > ranges[first + depth].second) {
            if (depth == 0) break;
            --depth;
            continue;
        }
        double d = offset + static_cast<double>(k[depth]) - c[static_cast<Eigen::Index>(first + depth)];
        partial[depth + 1] = partial[depth] + d * d;
        if (partial[depth + 1] > radiusSq) {
            // coordinates increase monotonically; past the center no later value can re-enter
            if (d > 0) {
                if (depth == 0) break;
                --depth;
            }
            continue;
        }
        if (depth + 1 == m) {
            long sum = 0;
            for (long v : k) sum += v;
            out.push_back({partial[m], static_cast<int>(((sum % 2) + 2) % 2)});
        } else {
            ++depth;
            k[depth] = ranges[first + depth].first - 1;
        }
    }
    return out;
}

}  // namespace

std::uint64_t count_e8_points(const RealVector &shift, const Window *ball, const Window *box) {
    require(shift.size() == 8, "count_e8_points: dimension must be 8");
    require(ball || box, "count_e8_points: need a ball or a box");
    if (ball) require(ball->shape == WindowShape::Ball && ball->dim() == 8, "count_e8_points: bad ball");
    if (box) require(box->shape == WindowShape::Box && box->dim() == 8, "count_e8_points: bad box");
    // points x - shift with x in E8; x = offset + k, k integral with even sum, offset 0 or 1/2
    std::uint64_t total = 0;
    for (double offset : {0.0, 0.5}) {
        std::vector<std::pair<long, long>> ranges(8);
        bool empty = false;
        for (Eigen::Index i = 0; i < 8; ++i) {
            double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
            if (ball) {
                lo = ball->center[i] + shift[i] - ball->radius;
                hi = ball->center[i] + shift[i] + ball->radius;
            }
            if (box) {
                lo = std::max(lo, box->center[i] + shift[i] - box->halfWidths[i]);
                hi = std::min(hi, box->center[i] + shift[i] + box->halfWidths[i]);
            }
            long a = static_cast<long>(std::ceil(lo - offset)), b = static_cast<long>(std::floor(hi - offset));
            ranges[static_cast<std::size_t>(i)] = {a, b};
            if (a > b) empty = true;
        }
        if (empty) continue;
        if (!ball) {
            // parity dynamic program over coordinates
            std::uint64_t even = 1, odd = 0;
            for (const auto &[a, b] : ranges) {
                std::uint64_t cnt = static_cast<std::uint64_t>(b - a + 1);
                std::uint64_t ce = cnt / 2 + ((cnt % 2) && (a % 2 == 0) ? 1 : 0);
                std::uint64_t co = cnt - ce;
                std::uint64_t ne = even * ce + odd * co, no = even * co + odd * ce;
                even = ne;
                odd = no;
            }
            total += even;
            continue;
        }
        RealVector c = ball->center + shift;
        double r2 = ball->radius * ball->radius;
        std::vector<HalfEntry> left = half_tuples(ranges, c, offset, 0, 4, r2);
        std::vector<HalfEntry> right = half_tuples(ranges, c, offset, 4, 8, r2);
        std::vector<double> rightBy[2];
        for (const HalfEntry &e : right) rightBy[e.parity].push_back(e.distSq);
        for (auto &v : rightBy) std::sort(v.begin(), v.end());
        for (const HalfEntry &e : left) {
            const std::vector<double> &v = rightBy[e.parity];
            total += static_cast<std::uint64_t>(std::upper_bound(v.begin(), v.end(), r2 - e.distSq) - v.begin());
        }
    }
    return total;
}

}  // namespace packstab
