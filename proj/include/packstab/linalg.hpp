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

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace packstab {

// Basis matrices hold basis vectors as columns.
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>> &rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    mpz_class &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const mpz_class &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix &other) const;
    IntMatrix operator*(long scalar) const;
    IntMatrix operator+(const IntMatrix &other) const;
    IntMatrix operator-(const IntMatrix &other) const;
    bool operator==(const IntMatrix &other) const;
    bool operator!=(const IntMatrix &other) const { return !(*this == other); }

    RealMatrix to_real() const;
    mpz_class max_abs() const;
    bool fits_long() const;
    long get_long(std::size_t i, std::size_t j) const;
    std::vector<long> column_long(std::size_t j) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> data_;
};

class SymRealMatrix {
public:
    SymRealMatrix() = default;
    // Reads the upper triangle of m and mirrors it.
    explicit SymRealMatrix(const RealMatrix &m);

    std::size_t n() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const RealMatrix &matrix() const noexcept { return m_; }

private:
    RealMatrix m_;
};

class UpperTriangular {
public:
    UpperTriangular() = default;
    explicit UpperTriangular(const RealMatrix &m);

    std::size_t n() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const RealMatrix &matrix() const noexcept { return m_; }
    double diagonal_product() const;

private:
    RealMatrix m_;
};

SymRealMatrix gram(const RealMatrix &basis);
mpz_class bareiss_det(const IntMatrix &m);
// Row-style Hermite normal form of the row span; returns a cols x cols
// upper-triangular matrix with positive pivots and reduced entries above them.
IntMatrix hnf(const IntMatrix &m);
UpperTriangular cholesky_upper(const SymRealMatrix &g);
RealMatrix orthogonal_align(const RealMatrix &a, const UpperTriangular &u);

// Exact solve of a*x = b over the rationals; empty when the solution is not integral.
std::optional<IntMatrix> solve_integral(const IntMatrix &a, const IntMatrix &b);
std::optional<IntMatrix> unimodular_inverse(const IntMatrix &m);
bool is_unimodular(const IntMatrix &m);
std::optional<IntMatrix> round_integral(const RealMatrix &m, double tol);
double max_abs(const RealMatrix &m);
double orthogonality_defect(const RealMatrix &q);

}  // namespace packstab
