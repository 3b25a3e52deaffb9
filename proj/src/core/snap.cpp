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

#include "packstab/snap.hpp"

#include <cmath>

#include "packstab/error.hpp"

namespace packstab {

double det_perturbation_bound(double m, double eps, int n) {
    require(m >= 1, "det_perturbation_bound: m must be at least 1");
    require(eps > 0 && eps < 1, "det_perturbation_bound: eps must lie in (0, 1)");
    require(n >= 1, "det_perturbation_bound: dimension must be positive");
    return std::pow(2.0, n) * std::pow(m, n - 1) * eps;
}

std::optional<IntGram> round_gram(const SymRealMatrix &g, double tol) {
    const std::size_t n = g.n();
    IntMatrix k(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double even = 2 * std::nearbyint(g(i, i) / 2);
        if (!(std::abs(g(i, i) - even) <= tol)) return std::nullopt;
        k(i, i) = mpz_class(even);
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = std::nearbyint(g(i, j));
            if (!(std::abs(g(i, j) - v) <= tol)) return std::nullopt;
            k(i, j) = mpz_class(v);
            k(j, i) = k(i, j);
        }
    }
    return IntGram::try_make(std::move(k));
}

static double gamma_unchecked(int n, double m) {
    return std::sqrt(2.0) * std::pow(n, 3.5 + n) * m * m * std::pow(m * m + 1, n);
}

double gamma_M(int n, double m) {
    require(n >= 2, "gamma_M: dimension must be at least 2");
    require(m > 1, "gamma_M: m must exceed 1");
    return gamma_unchecked(n, m);
}

double log2_gamma_M(int n, double m) {
    require(n >= 2 && m > 1, "log2_gamma_M: requires n >= 2 and m > 1");
    return 0.5 + (3.5 + n) * std::log2(n) + 2 * std::log2(m) + n * std::log2(m * m + 1);
}

SnapResult snap_to_integral_gram(const RealMatrix &basis, const IntGram &k) {
    require(basis.rows() == basis.cols() && static_cast<std::size_t>(basis.cols()) == k.n(),
            "snap_to_integral_gram: shape mismatch");
    SymRealMatrix b = gram(basis);
    UpperTriangular lb = [&] {
        try {
            return cholesky_upper(b);
        } catch (const NotPositiveDefiniteError &) {
            fail(Status::Numeric, "snap_to_integral_gram: input basis too degenerate");
        }
    }();
    UpperTriangular lk = cholesky_upper(SymRealMatrix(k.to_real()));
    RealMatrix q = orthogonal_align(basis, lb);
    SnapResult r;
    r.snappedBasis = q * lk.matrix();
    r.targetGram = k;
    r.maxDisplacement = (r.snappedBasis - basis).colwise().norm().maxCoeff();
    // Procrustes rotation of the aligned basis; kept when it moves the columns less
    Eigen::JacobiSVD<RealMatrix> svd(basis * r.snappedBasis.transpose(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    RealMatrix rotated = svd.matrixU() * svd.matrixV().transpose() * r.snappedBasis;
    double rotatedDisplacement = (rotated - basis).colwise().norm().maxCoeff();
    if (rotatedDisplacement < r.maxDisplacement) {
        r.snappedBasis = rotated;
        r.maxDisplacement = rotatedDisplacement;
    }
    r.gramDeviation = max_abs(b.matrix() - k.to_real());
    double det = std::abs(basis.determinant());
    double m = std::max(basis.colwise().norm().maxCoeff(), 1.0 / det);
    r.normBound = m;
    r.certifiedBound = gamma_unchecked(static_cast<int>(k.n()), m) * r.gramDeviation;
    return r;
}

}  // namespace packstab
