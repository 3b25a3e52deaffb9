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
#include <limits>
#include <optional>
#include <vector>

#include "packstab/enumeration.hpp"
#include "packstab/int_gram.hpp"
#include "packstab/linalg.hpp"

namespace packstab {

class Lattice {
public:
    Lattice() = default;
    explicit Lattice(RealMatrix basis);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
    const RealMatrix &basis() const noexcept { return basis_; }
    RealVector vector(std::size_t i) const { return basis_.col(static_cast<Eigen::Index>(i)); }
    double det() const;
    SymRealMatrix gram_matrix() const { return gram(basis_); }
    Lattice scaled(double t) const { return Lattice(basis_ * t); }
    Lattice transformed(const RealMatrix &r) const { return Lattice(r * basis_); }
    Lattice with_basis_change(const IntMatrix &t) const { return Lattice(basis_ * t.to_real()); }
    RealVector point(const std::vector<long> &coeffs) const;
    double max_basis_norm() const;
    double norm_product() const;

private:
    RealMatrix basis_;
};

struct LllResult {
    Lattice lattice;
    IntMatrix transform;  // lattice.basis() = input.basis() * transform
};

LllResult lll_reduce_with_transform(const Lattice &lat, double delta = 0.99);
Lattice lll_reduce(const Lattice &lat);
// 2^{n(n-1)/4}
double lll_bound(std::size_t n);

RealMatrix dual_basis(const Lattice &lat);

struct DualBasisHypothesis {
    double d;    // lower bound on basis vector norms
    double D;    // upper bound on basis vector norms
    double rho;  // bound on prod ||u_i|| / |det|
};
RealVector coords_in_basis(const RealVector &x, const Lattice &lat);
// Also asserts |lambda_i| <= (rho/d) ||x||, raising an internal error on violation.
RealVector coords_in_basis(const RealVector &x, const Lattice &lat, const DualBasisHypothesis &h);

struct ShortestVector {
    RealVector vector;
    std::vector<long> coeffs;  // with respect to the input basis
    double length = 0;
};
ShortestVector shortest_vector(const Lattice &lat, double normSqCap = std::numeric_limits<double>::infinity(),
                               std::uint64_t budget = kDefaultNodeBudget);

struct ShellListing {
    double normSq = 0;
    std::vector<std::vector<long>> vectors;  // coefficient vectors, lexicographically sorted
    std::size_t count = 0;
};
ShellListing enumerate_shell(const Lattice &lat, double normSq, double tol = 1e-6,
                             std::uint64_t budget = kDefaultNodeBudget);
// Exact variant: every vector with x^t G x == normSq.
ShellListing enumerate_shell(const IntGram &g, long normSq, std::uint64_t budget = kDefaultNodeBudget);
// All nonzero vectors with x^t G x <= maxNormSq, grouped by norm, each shell sorted.
std::vector<ShellListing> enumerate_shells_upto(const IntGram &g, long maxNormSq,
                                                std::uint64_t budget = kDefaultNodeBudget);
std::vector<ShellListing> enumerate_shells_upto(const Lattice &lat, double maxNormSq, double tol = 1e-6,
                                                std::uint64_t budget = kDefaultNodeBudget);

// Verifies the packing condition (minimal norm >= 2 radius) and returns 1/det.
double center_density(const Lattice &lat, double radius);

// Real basis whose Gram is g (upper Cholesky factor).
Lattice lattice_from_gram(const IntGram &g);
// Exact LLL on an integer Gram; returns T with T^t G T reduced.
IntMatrix lll_gram_transform(const IntGram &g, double delta = 0.99);

}  // namespace packstab
