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

#include "packstab/window.hpp"

#include <cmath>

#include "packstab/error.hpp"

namespace packstab {

Window Window::ball(RealVector center, double radius) {
    require(radius > 0, "Window::ball: radius must be positive");
    Window w;
    w.shape = WindowShape::Ball;
    w.center = std::move(center);
    w.radius = radius;
    return w;
}

Window Window::box(RealVector center, RealVector halfWidths) {
    require(center.size() == halfWidths.size(), "Window::box: dimension mismatch");
    require(halfWidths.size() > 0 && halfWidths.minCoeff() > 0, "Window::box: half-widths must be positive");
    Window w;
    w.shape = WindowShape::Box;
    w.center = std::move(center);
    w.halfWidths = std::move(halfWidths);
    return w;
}

Window Window::cube(RealVector center, double halfWidth) {
    RealVector h = RealVector::Constant(center.size(), halfWidth);
    return box(std::move(center), std::move(h));
}

bool Window::contains(const RealVector &p, double slack) const {
    if (shape == WindowShape::Ball) return (p - center).squaredNorm() <= (radius + slack) * (radius + slack);
    for (Eigen::Index i = 0; i < center.size(); ++i)
        if (std::abs(p[i] - center[i]) > halfWidths[i] + slack) return false;
    return true;
}

bool Window::contains_ball(const RealVector &c, double r) const {
    if (shape == WindowShape::Ball) return (c - center).norm() + r <= radius;
    for (Eigen::Index i = 0; i < center.size(); ++i)
        if (std::abs(c[i] - center[i]) + r > halfWidths[i]) return false;
    return true;
}

double Window::volume() const {
    if (shape == WindowShape::Ball) return ball_volume(static_cast<int>(dim()), radius);
    double v = 1;
    for (Eigen::Index i = 0; i < halfWidths.size(); ++i) v *= 2 * halfWidths[i];
    return v;
}

double Window::inradius() const { return shape == WindowShape::Ball ? radius : halfWidths.minCoeff(); }

double Window::circumradius() const { return shape == WindowShape::Ball ? radius : halfWidths.norm(); }

Window Window::translated(const RealVector &shift) const {
    Window w = *this;
    w.center = center + shift;
    return w;
}

Window Window::recentered(const RealVector &c) const {
    Window w = *this;
    w.center = c;
    return w;
}

Window Window::shrunk(double margin) const {
    require(margin < inradius(), "Window::shrunk: margin exceeds the inradius");
    Window w = *this;
    if (shape == WindowShape::Ball) w.radius -= margin;
    else w.halfWidths.array() -= margin;
    return w;
}

Window Window::scaled(double factor) const {
    require(factor > 0, "Window::scaled: factor must be positive");
    Window w = *this;
    w.radius *= factor;
    w.halfWidths *= factor;
    return w;
}

double unit_ball_volume(int n) {
    require(n >= 0, "unit_ball_volume: negative dimension");
    return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1);
}

double ball_volume(int n, double r) { return unit_ball_volume(n) * std::pow(r, n); }

void check_window(const Window &w, double r, int dim) {
    require(static_cast<int>(w.dim()) == dim, "check_window: dimension mismatch");
    require(w.inradius() >= r, "check_window: window does not contain a ball of the required radius");
    double log2Cap = (dim == 24 ? 140 : 20) + std::log2(r);
    require(std::log2(w.diameter()) <= log2Cap, "check_window: window diameter too large");
}

double parallel_body_volume(const Window &w, double t) {
    require(t >= 0, "parallel_body_volume: negative distance");
    const int n = static_cast<int>(w.dim());
    if (w.shape == WindowShape::Ball) return ball_volume(n, w.radius + t);
    // sum over k of e_{n-k}(edges) kappa_k t^k
    std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
    e[0] = 1;
    for (int i = 0; i < n; ++i) {
        double a = 2 * w.halfWidths[i];
        for (int k = i + 1; k >= 1; --k) e[static_cast<std::size_t>(k)] += a * e[static_cast<std::size_t>(k) - 1];
    }
    double v = 0;
    for (int k = 0; k <= n; ++k) v += e[static_cast<std::size_t>(n - k)] * unit_ball_volume(k) * std::pow(t, k);
    return v;
}

double finite_packing_count_bound(const Window &w, int dim) {
    require(dim == 8 || dim == 24, "finite_packing_count_bound: dimension must be 8 or 24");
    require(static_cast<int>(w.dim()) == dim, "finite_packing_count_bound: dimension mismatch");
    return parallel_body_volume(w, dim == 8 ? std::sqrt(2.0) : 2.0);
}

}  // namespace packstab
