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

#pragma once

#include "packstab/linalg.hpp"

namespace packstab {

enum class WindowShape { Ball, Box };

struct Window {
    WindowShape shape = WindowShape::Ball;
    RealVector center;
    double radius = 0;      // ball
    RealVector halfWidths;  // box

    static Window ball(RealVector center, double radius);
    static Window box(RealVector center, RealVector halfWidths);
    static Window cube(RealVector center, double halfWidth);

    std::size_t dim() const { return static_cast<std::size_t>(center.size()); }
    bool contains(const RealVector &p, double slack = 0) const;
    bool contains_ball(const RealVector &c, double r) const;
    double volume() const;
    double inradius() const;
    double circumradius() const;
    double diameter() const { return 2 * circumradius(); }
    Window translated(const RealVector &shift) const;
    Window recentered(const RealVector &c) const;
    // Inner parallel body at distance margin.
    Window shrunk(double margin) const;
    Window scaled(double factor) const;
};

double unit_ball_volume(int n);
double ball_volume(int n, double r);
// Requires an inscribed ball of radius r and diameter at most 2^20 r (dim 8) or 2^140 r (dim 24).
void check_window(const Window &w, double r, int dim);
// Volume of w + t B^n (Steiner formula for boxes).
double parallel_body_volume(const Window &w, double t);
// V(K + sqrt(2) B^8) in dimension 8, V(K + 2 B^24) in dimension 24.
double finite_packing_count_bound(const Window &w, int dim);

}  // namespace packstab
