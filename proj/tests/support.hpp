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

#include <cstdint>
#include <random>
#include <vector>

#include "packstab/lattice.hpp"
#include "packstab/linalg.hpp"

namespace packstab::testing {

using Rng = std::mt19937_64;

inline RealMatrix random_gaussian(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> d;
    RealMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = d(rng);
    return a;
}

inline RealMatrix random_orthogonal(std::size_t n, Rng &rng) {
    Eigen::HouseholderQR<RealMatrix> qr(random_gaussian(n, n, rng));
    RealMatrix q = qr.householderQ();
    return q;
}

// Product of elementary column operations with entries kept at most maxEntry.
inline IntMatrix random_unimodular(std::size_t n, Rng &rng, std::size_t steps = 0, long maxEntry = 5) {
    if (steps == 0) steps = 3 * n;
    IntMatrix t = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<long> coef(-2, 2);
    for (std::size_t s = 0; s < steps; ++s) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        IntMatrix e = IntMatrix::identity(n);
        e(i, j) = coef(rng);
        IntMatrix next = t * e;
        if (next.max_abs() > maxEntry) continue;
        t = next;
    }
    std::bernoulli_distribution flip(0.5);
    if (flip(rng)) {
        IntMatrix e = IntMatrix::identity(n);
        e(0, 0) = -1;
        t = t * e;
    }
    return t;
}

// Entries drawn uniformly from [-delta, delta].
inline RealMatrix uniform_noise(std::size_t rows, std::size_t cols, double delta, Rng &rng) {
    std::uniform_real_distribution<double> u(-delta, delta);
    RealMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = u(rng);
    return a;
}

// Q * reference * T + noise.
inline Lattice noisy_copy(const Lattice &reference, double delta, Rng &rng) {
    const std::size_t n = reference.dim();
    RealMatrix b = random_orthogonal(n, rng) * reference.basis() * random_unimodular(n, rng).to_real();
    b += uniform_noise(n, n, delta, rng);
    return Lattice(b);
}

inline double log2_norm_product(const RealMatrix &b) {
    double s = 0;
    for (Eigen::Index i = 0; i < b.cols(); ++i) s += std::log2(b.col(i).norm());
    return s;
}

}  // namespace packstab::testing
