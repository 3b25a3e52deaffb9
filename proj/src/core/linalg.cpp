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

#include "packstab/linalg.hpp"

#include <algorithm>
#include <climits>
#include <cmath>

#include "packstab/error.hpp"

namespace packstab {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        require(r.size() == cols_, "IntMatrix: ragged initializer");
        for (long v : r) data_.emplace_back(v);
    }
}

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>> &rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        require(rows[i].size() == m.cols(), "IntMatrix: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix &o) const {
    require(cols_ == o.rows_, "IntMatrix: shape mismatch in product");
    IntMatrix p(rows_, o.cols_);
    mpz_class acc;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < o.cols_; ++j) {
            acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) {
                const mpz_class &a = (*this)(i, k);
                if (sgn(a) != 0) acc += a * o(k, j);
            }
            p(i, j) = acc;
        }
    return p;
}

IntMatrix IntMatrix::operator*(long scalar) const {
    IntMatrix p = *this;
    for (auto &v : p.data_) v *= scalar;
    return p;
}

IntMatrix IntMatrix::operator+(const IntMatrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "IntMatrix: shape mismatch in sum");
    IntMatrix p = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) p.data_[k] += o.data_[k];
    return p;
}

IntMatrix IntMatrix::operator-(const IntMatrix &o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "IntMatrix: shape mismatch in difference");
    IntMatrix p = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) p.data_[k] -= o.data_[k];
    return p;
}

bool IntMatrix::operator==(const IntMatrix &o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

RealMatrix IntMatrix::to_real() const {
    RealMatrix r(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j).get_d();
    return r;
}

mpz_class IntMatrix::max_abs() const {
    mpz_class m = 0;
    for (const auto &v : data_)
        if (abs(v) > m) m = abs(v);
    return m;
}

bool IntMatrix::fits_long() const {
    return std::all_of(data_.begin(), data_.end(), [](const mpz_class &v) { return v.fits_slong_p(); });
}

long IntMatrix::get_long(std::size_t i, std::size_t j) const {
    const mpz_class &v = (*this)(i, j);
    if (!v.fits_slong_p()) fail(Status::Numeric, "IntMatrix entry exceeds machine integer range");
    return v.get_si();
}

std::vector<long> IntMatrix::column_long(std::size_t j) const {
    std::vector<long> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = get_long(i, j);
    return c;
}

SymRealMatrix::SymRealMatrix(const RealMatrix &m) : m_(m) {
    require(m.rows() == m.cols() && m.rows() > 0, "SymRealMatrix: matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j) m_(j, i) = m_(i, j);
    require(m_.allFinite(), "SymRealMatrix: non-finite entry");
}

UpperTriangular::UpperTriangular(const RealMatrix &m) : m_(m) {
    require(m.rows() == m.cols() && m.rows() > 0, "UpperTriangular: matrix must be square and nonempty");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        require(m(i, i) > 0, "UpperTriangular: diagonal must be positive");
        for (Eigen::Index j = 0; j < i; ++j) require(m(i, j) == 0.0, "UpperTriangular: nonzero below diagonal");
    }
}

double UpperTriangular::diagonal_product() const {
    double p = 1;
    for (Eigen::Index i = 0; i < m_.rows(); ++i) p *= m_(i, i);
    return p;
}

SymRealMatrix gram(const RealMatrix &basis) {
    require(basis.rows() == basis.cols() && basis.rows() > 0, "gram: basis must be n x n");
    require(basis.allFinite(), "gram: non-finite basis entry");
    const Eigen::Index n = basis.cols();
    RealMatrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) g(i, j) = basis.col(i).dot(basis.col(j));
    return SymRealMatrix(g);
}

mpz_class bareiss_det(const IntMatrix &m) {
    require(m.square(), "bareiss_det: matrix must be square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t p = k + 1;
            while (p < n && sgn(a(p, k)) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a(k, k);
    }
    mpz_class d = a(n - 1, n - 1);
    return sign > 0 ? d : mpz_class(-d);
}

IntMatrix hnf(const IntMatrix &m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    require(cols > 0, "hnf: empty matrix");
    IntMatrix a = m;
    auto row_sub = [&](std::size_t dst, std::size_t src, const mpz_class &q) {
        if (sgn(q) == 0) return;
        for (std::size_t j = 0; j < cols; ++j)
            if (sgn(a(src, j)) != 0) a(dst, j) -= q * a(src, j);
    };
    auto row_swap = [&](std::size_t r1, std::size_t r2) {
        if (r1 == r2) return;
        for (std::size_t j = 0; j < cols; ++j) std::swap(a(r1, j), a(r2, j));
    };
    std::size_t pivot = 0;
    mpz_class q;
    for (std::size_t j = 0; j < cols; ++j) {
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = pivot; i < rows; ++i)
                if (sgn(a(i, j)) != 0 && (best == rows || abs(a(i, j)) < abs(a(best, j)))) best = i;
            if (best == rows) fail(Status::Rank, "hnf: input does not have full column rank");
            row_swap(pivot, best);
            bool done = true;
            for (std::size_t i = pivot + 1; i < rows; ++i) {
                if (sgn(a(i, j)) == 0) continue;
                mpz_fdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(pivot, j).get_mpz_t());
                row_sub(i, pivot, q);
                if (sgn(a(i, j)) != 0) done = false;
            }
            if (done) break;
        }
        if (sgn(a(pivot, j)) < 0)
            for (std::size_t k = 0; k < cols; ++k) a(pivot, k) = -a(pivot, k);
        for (std::size_t i = 0; i < pivot; ++i) {
            mpz_fdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(pivot, j).get_mpz_t());
            row_sub(i, pivot, q);
        }
        ++pivot;
    }
    IntMatrix h(cols, cols);
    for (std::size_t i = 0; i < cols; ++i)
        for (std::size_t j = 0; j < cols; ++j) h(i, j) = a(i, j);
    return h;
}

UpperTriangular cholesky_upper(const SymRealMatrix &g) {
    const std::size_t n = g.n();
    RealMatrix u = RealMatrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = g(i, i);
        for (std::size_t k = 0; k < i; ++k) d -= u(k, i) * u(k, i);
        if (!(d > 0) || !std::isfinite(d)) throw NotPositiveDefiniteError(i + 1, "cholesky_upper: matrix is not positive definite");
        u(i, i) = std::sqrt(d);
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = g(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= u(k, i) * u(k, j);
            u(i, j) = s / u(i, i);
        }
    }
    return UpperTriangular(u);
}

RealMatrix orthogonal_align(const RealMatrix &a, const UpperTriangular &u) {
    require(a.rows() == a.cols() && static_cast<std::size_t>(a.rows()) == u.n(), "orthogonal_align: shape mismatch");
    Eigen::FullPivLU<RealMatrix> lu(a);
    if (lu.rank() < a.rows()) fail(Status::Rank, "orthogonal_align: singular basis");
    RealMatrix q = u.matrix().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(a);
    return q;
}

std::optional<IntMatrix> solve_integral(const IntMatrix &a, const IntMatrix &b) {
    require(a.square() && a.rows() == b.rows(), "solve_integral: shape mismatch");
    const std::size_t n = a.rows(), m = b.cols();
    std::vector<mpq_class> t(n * (n + m));
    auto at = [&](std::size_t i, std::size_t j) -> mpq_class & { return t[i * (n + m) + j]; };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) at(i, j) = a(i, j);
        for (std::size_t j = 0; j < m; ++j) at(i, n + j) = b(i, j);
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(at(p, c)) == 0) ++p;
        if (p == n) fail(Status::Rank, "solve_integral: singular matrix");
        if (p != c)
            for (std::size_t j = 0; j < n + m; ++j) std::swap(at(p, j), at(c, j));
        mpq_class inv = 1 / at(c, c);
        for (std::size_t j = c; j < n + m; ++j) at(c, j) *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || sgn(at(i, c)) == 0) continue;
            mpq_class f = at(i, c);
            for (std::size_t j = c; j < n + m; ++j)
                if (sgn(at(c, j)) != 0) at(i, j) -= f * at(c, j);
        }
    }
    IntMatrix x(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const mpq_class &v = at(i, n + j);
            if (v.get_den() != 1) return std::nullopt;
            x(i, j) = v.get_num();
        }
    return x;
}

std::optional<IntMatrix> unimodular_inverse(const IntMatrix &m) {
    require(m.square(), "unimodular_inverse: matrix must be square");
    if (abs(bareiss_det(m)) != 1) return std::nullopt;
    return solve_integral(m, IntMatrix::identity(m.rows()));
}

bool is_unimodular(const IntMatrix &m) { return m.square() && abs(bareiss_det(m)) == 1; }

std::optional<IntMatrix> round_integral(const RealMatrix &m, double tol) {
    IntMatrix r(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v = std::nearbyint(m(i, j));
            if (!std::isfinite(v) || std::abs(v - m(i, j)) > tol) return std::nullopt;
            r(i, j) = mpz_class(v);
        }
    return r;
}

double max_abs(const RealMatrix &m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

double orthogonality_defect(const RealMatrix &q) {
    return max_abs(q.transpose() * q - RealMatrix::Identity(q.cols(), q.cols()));
}

}  // namespace packstab
