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

#include "packstab/int_gram.hpp"

#include "packstab/error.hpp"

namespace packstab {

std::vector<mpz_class> leading_minors(const IntMatrix &m) {
    require(m.square(), "leading_minors: matrix must be square");
    const std::size_t n = m.rows();
    // Bareiss without pivoting: the k-th pivot equals the k-th leading minor.
    std::vector<mpz_class> minors;
    IntMatrix a = m;
    mpz_class prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        minors.push_back(a(k, k));
        if (sgn(a(k, k)) == 0) {
            minors.resize(n, 0);
            return minors;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        prev = a(k, k);
    }
    return minors;
}

static std::size_t first_bad_minor(const IntMatrix &m) {
    auto minors = leading_minors(m);
    for (std::size_t k = 0; k < minors.size(); ++k)
        if (sgn(minors[k]) <= 0) return k + 1;
    return 0;
}

static void check_symmetric(const IntMatrix &m) {
    require(m.square() && m.rows() > 0, "IntGram: matrix must be square and nonempty");
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) require(m(i, j) == m(j, i), "IntGram: matrix is not symmetric");
}

IntGram::IntGram(IntMatrix m) : m_(std::move(m)) {
    check_symmetric(m_);
    if (std::size_t bad = first_bad_minor(m_)) throw NotPositiveDefiniteError(bad, "IntGram: not positive definite");
}

std::optional<IntGram> IntGram::try_make(IntMatrix m) {
    if (!m.square() || m.rows() == 0) return std::nullopt;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) return std::nullopt;
    if (first_bad_minor(m)) return std::nullopt;
    IntGram g;
    g.m_ = std::move(m);
    return g;
}

bool IntGram::is_even() const {
    for (std::size_t i = 0; i < n(); ++i)
        if (mpz_odd_p(m_(i, i).get_mpz_t())) return false;
    return true;
}

mpz_class IntGram::det() const { return bareiss_det(m_); }

RealMatrix IntGram::to_real() const { return m_.to_real(); }

IntGram IntGram::transformed(const IntMatrix &t) const { return IntGram(t.transpose() * m_ * t); }

IntGram direct_sum(const IntGram &a, const IntGram &b) {
    IntMatrix m(a.n() + b.n(), a.n() + b.n());
    for (std::size_t i = 0; i < a.n(); ++i)
        for (std::size_t j = 0; j < a.n(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.n(); ++i)
        for (std::size_t j = 0; j < b.n(); ++j) m(a.n() + i, a.n() + j) = b(i, j);
    return IntGram(std::move(m));
}

}  // namespace packstab
