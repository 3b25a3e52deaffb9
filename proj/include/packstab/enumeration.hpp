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

#include <cmath>
#include <cstdint>
#include <vector>

#include "packstab/error.hpp"
#include "packstab/linalg.hpp"

namespace packstab {

inline constexpr std::uint64_t kDefaultNodeBudget = 1ull << 36;

// Fincke-Pohst enumeration of integer vectors x with ||B(x - t)||^2 <= r^2,
// where B is fixed at construction and t is given in basis coordinates.
class BallEnumerator {
public:
    explicit BallEnumerator(const RealMatrix &basis);

    int dim() const noexcept { return n_; }
    const RealMatrix &basis() const noexcept { return basis_; }
    // Basis coordinates of a point given in ambient coordinates.
    RealVector coordinates(const RealVector &x) const { return inverse_ * x; }
    const RealMatrix &inverse() const noexcept { return inverse_; }

    // visit(const long *x, double distSq) is called for every enumerated vector.
    template <class Visit>
    void visit(const double *t, double radiusSq, Visit &&f, std::uint64_t budget = kDefaultNodeBudget) const;

    // As visit, also passing the ambient point origin + Bx as f(x, point, distSq).
    template <class Visit>
    void visit_points(const double *t, double radiusSq, const double *origin, Visit &&f,
                      std::uint64_t budget = kDefaultNodeBudget) const;

    // Number of lattice points within the ball; innermost level counted in closed form.
    std::uint64_t count(const double *t, double radiusSq, std::uint64_t budget = kDefaultNodeBudget) const;

private:
    int n_;
    RealMatrix basis_, inverse_;
    std::vector<double> rdiag2_;  // squared Gram-Schmidt lengths
    std::vector<double> mu_;      // mu_[k*n+j] = R(k,j)/R(k,k), j > k
};

template <class Visit>
void BallEnumerator::visit(const double *t, double radiusSq, Visit &&f, std::uint64_t budget) const {
    const int n = n_;
    if (radiusSq < 0) return;
    const double r2 = radiusSq * (1 + 2e-9) + 1e-300;
    std::vector<long> x(n), hi(n);
    std::vector<double> c(n), partial(n + 1, 0.0);
    std::uint64_t nodes = 0;
    int k = n - 1;
    auto open_level = [&](int lvl) -> bool {
        double ck = t[lvl];
        const double *mu = &mu_[static_cast<std::size_t>(lvl) * n];
        for (int j = lvl + 1; j < n; ++j) ck -= mu[j] * (static_cast<double>(x[j]) - t[j]);
        c[lvl] = ck;
        double rem = r2 - partial[lvl + 1];
        if (rem < 0) return false;
        double w = std::sqrt(rem / rdiag2_[lvl]);
        double lo = std::ceil(ck - w), up = std::floor(ck + w);
        if (lo > up) return false;
        x[lvl] = static_cast<long>(lo);
        hi[lvl] = static_cast<long>(up);
        return true;
    };
    if (!open_level(k)) return;
    while (true) {
        if (x[k] > hi[k]) {
            ++k;
            if (k == n) return;
            ++x[k];
            continue;
        }
        if (++nodes > budget) fail(Status::Resource, "enumeration node budget exceeded");
        double d = static_cast<double>(x[k]) - c[k];
        partial[k] = partial[k + 1] + rdiag2_[k] * d * d;
        if (k == 0) {
            f(static_cast<const long *>(x.data()), partial[0]);
            ++x[0];
            continue;
        }
        if (open_level(k - 1)) {
            --k;
        } else {
            ++x[k];
        }
    }
}

template <class Visit>
void BallEnumerator::visit_points(const double *t, double radiusSq, const double *origin, Visit &&f,
                                  std::uint64_t budget) const {
    const int n = n_;
    if (radiusSq < 0) return;
    const double r2 = radiusSq * (1 + 2e-9) + 1e-300;
    std::vector<long> x(n), hi(n);
    std::vector<double> c(n), partial(n + 1, 0.0);
    std::vector<double> pts(static_cast<std::size_t>(n) * (n + 1));
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(n) * n + i] = origin[i];
    const double *bd = basis_.data();
    std::uint64_t nodes = 0;
    int k = n - 1;
    auto open_level = [&](int lvl) -> bool {
        double ck = t[lvl];
        const double *mu = &mu_[static_cast<std::size_t>(lvl) * n];
        for (int j = lvl + 1; j < n; ++j) ck -= mu[j] * (static_cast<double>(x[j]) - t[j]);
        c[lvl] = ck;
        double rem = r2 - partial[lvl + 1];
        if (rem < 0) return false;
        double w = std::sqrt(rem / rdiag2_[lvl]);
        double lo = std::ceil(ck - w), up = std::floor(ck + w);
        if (lo > up) return false;
        x[lvl] = static_cast<long>(lo);
        hi[lvl] = static_cast<long>(up);
        return true;
    };
    if (!open_level(k)) return;
    while (true) {
        if (x[k] > hi[k]) {
            ++k;
            if (k == n) return;
            ++x[k];
            continue;
        }
        if (++nodes > budget) fail(Status::Resource, "enumeration node budget exceeded");
        double d = static_cast<double>(x[k]) - c[k];
        partial[k] = partial[k + 1] + rdiag2_[k] * d * d;
        {
            double *pk = &pts[static_cast<std::size_t>(k) * n];
            const double *pu = pk + n;
            const double *col = bd + static_cast<std::size_t>(k) * n;
            const double xk = static_cast<double>(x[k]);
            for (int i = 0; i < n; ++i) pk[i] = pu[i] + xk * col[i];
        }
        if (k == 0) {
            f(static_cast<const long *>(x.data()), static_cast<const double *>(pts.data()), partial[0]);
            ++x[0];
            continue;
        }
        if (open_level(k - 1)) {
            --k;
        } else {
            ++x[k];
        }
    }
}

}  // namespace packstab
