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

#include "packstab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "packstab/error.hpp"

namespace packstab {

Lattice e8_short_basis() {
    RealMatrix b = RealMatrix::Zero(8, 8);
    b(0, 0) = 2;
    for (int i = 1; i < 7; ++i) {
        b(i, i) = 1;
        b(i - 1, i) = -1;
    }
    b.col(7).setConstant(0.5);
    return Lattice(b);
}

IntGram e8_gram() {
    RealMatrix twice = 2 * e8_short_basis().basis();
    IntMatrix m = *round_integral(twice, 0);
    IntMatrix g = m.transpose() * m;
    IntMatrix q(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            q(i, j) = g(i, j);
            mpz_divexact_ui(q(i, j).get_mpz_t(), q(i, j).get_mpz_t(), 4);
        }
    return IntGram(q);
}

IntMatrix golay_generator() {
    // cyclic [23,12] code with generator polynomial x^11+x^10+x^6+x^5+x^4+x^2+1, plus parity
    const int gpoly[12] = {1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 1, 1};
    IntMatrix g(12, 24);
    for (int r = 0; r < 12; ++r) {
        int weight = 0;
        for (int k = 0; k < 12; ++k) {
            g(r, r + k) = gpoly[k];
            weight += gpoly[k];
        }
        g(r, 23) = weight % 2;
    }
    return g;
}

IntMatrix leech_integer_basis() {
    static const IntMatrix basis = [] {
        IntMatrix golay = golay_generator();
        std::vector<std::vector<long>> gens;
        for (std::size_t r = 0; r < 12; ++r) {
            std::vector<long> row(24);
            for (std::size_t j = 0; j < 24; ++j) row[j] = 2 * golay(r, j).get_si();
            gens.push_back(row);
        }
        for (int i = 1; i < 24; ++i) {
            std::vector<long> row(24, 0);
            row[0] = 4;
            row[i] = -4;
            gens.push_back(row);
        }
        std::vector<long> plus(24, 0);
        plus[0] = 4;
        plus[1] = 4;
        gens.push_back(plus);
        std::vector<long> eight(24, 0);
        eight[0] = 8;
        gens.push_back(eight);
        std::vector<long> odd(24, 1);
        odd[0] = -3;
        gens.push_back(odd);
        return hnf(IntMatrix::from_rows(gens));
    }();
    return basis;
}

Lattice leech_basis() {
    return Lattice(leech_integer_basis().transpose().to_real() / std::sqrt(8.0));
}

IntGram leech_gram() {
    static const IntGram g = [] {
        IntMatrix h = leech_integer_basis();
        IntMatrix p = h * h.transpose();
        for (std::size_t i = 0; i < 24; ++i)
            for (std::size_t j = 0; j < 24; ++j) {
                if (!mpz_divisible_ui_p(p(i, j).get_mpz_t(), 8)) fail(Status::Internal, "leech_gram: Gram is not integral");
                mpz_divexact_ui(p(i, j).get_mpz_t(), p(i, j).get_mpz_t(), 8);
            }
        return IntGram(p);
    }();
    return g;
}

std::optional<IntMatrix> unimodular_basis_from_vectors(const std::vector<std::vector<long>> &vectors, std::size_t n) {
    // Greedy: keep a candidate when it raises the rank and the chosen set stays primitive,
    // i.e. the gcd of its maximal minors (the determinant of the row HNF) is 1.
    std::vector<std::size_t> chosen;
    RealMatrix q(n, 0);
    for (std::size_t k = 0; k < vectors.size() && chosen.size() < n; ++k) {
        RealVector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(vectors[k][i]);
        double original = v.norm();
        for (Eigen::Index j = 0; j < q.cols(); ++j) v -= q.col(j).dot(v) * q.col(j);
        if (v.norm() <= 1e-9 * std::max(1.0, original)) continue;
        const std::size_t r = chosen.size() + 1;
        IntMatrix c(n, r);
        for (std::size_t col = 0; col < r; ++col) {
            const auto &src = col + 1 < r ? vectors[chosen[col]] : vectors[k];
            for (std::size_t i = 0; i < n; ++i) c(i, col) = src[i];
        }
        if (abs(bareiss_det(hnf(c))) != 1) continue;
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = v.normalized();
        chosen.push_back(k);
    }
    if (chosen.size() < n) return std::nullopt;
    IntMatrix out(n, n);
    for (std::size_t col = 0; col < n; ++col)
        for (std::size_t i = 0; i < n; ++i) out(i, col) = vectors[chosen[col]][i];
    if (abs(bareiss_det(out)) != 1) return std::nullopt;
    return out;
}

const IntMatrix &leech_minimal_basis_coefficients() {
    static std::once_flag once;
    static IntMatrix coeffs;
    std::call_once(once, [] {
        ShellListing shell = enumerate_shell(leech_gram(), 4);
        auto basis = unimodular_basis_from_vectors(shell.vectors, 24);
        if (!basis || abs(bareiss_det(*basis)) != 1) fail(Status::Internal, "leech_short_basis: exchange did not reach a basis");
        coeffs = *basis;
    });
    return coeffs;
}

Lattice leech_short_basis() { return leech_basis().with_basis_change(leech_minimal_basis_coefficients()); }

IntGram leech_short_gram() { return leech_gram().transformed(leech_minimal_basis_coefficients()); }

bool is_even_unimodular(const IntGram &g) {
    if (!g.is_even()) return false;
    auto minors = leading_minors(g.matrix());
    for (const auto &m : minors)
        if (sgn(m) <= 0) return false;
    return minors.back() == 1;
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::E8: return "E8";
    case Verdict::Leech: return "Leech";
    case Verdict::OtherEvenUnimodular: return "OtherEvenUnimodular";
    case Verdict::NotEvenUnimodular: return "NotEvenUnimodular";
    }
    return "unknown";
}

LatticeIdentity identify_even_unimodular(const IntGram &g, std::uint64_t budget) {
    LatticeIdentity id;
    if (!g.is_even()) {
        for (std::size_t i = 0; i < g.n(); ++i)
            if (mpz_odd_p(g(i, i).get_mpz_t())) {
                id.evidence = "odd diagonal entry at index " + std::to_string(i);
                break;
            }
        return id;
    }
    mpz_class d = g.det();
    if (d != 1) {
        id.evidence = "determinant " + d.get_str();
        return id;
    }
    const std::size_t n = g.n();
    if (n == 8) {
        id.verdict = Verdict::E8;
        id.evidence = "even unimodular in dimension 8";
        return id;
    }
    if (n == 24) {
        ShellListing roots = enumerate_shell(g, 2, budget);
        if (roots.count == 0) {
            id.verdict = Verdict::Leech;
            id.evidence = "even unimodular in dimension 24 without norm 2 vectors";
        } else {
            id.verdict = Verdict::OtherEvenUnimodular;
            id.witness = roots.vectors.front();
            id.evidence = std::to_string(roots.count) + " vectors of norm 2";
        }
        return id;
    }
    id.verdict = Verdict::OtherEvenUnimodular;
    id.evidence = "even unimodular in dimension " + std::to_string(n);
    return id;
}

bool shares_short_vector(const RealMatrix &psi, double maxNormSq, double tol) {
    Lattice e8 = e8_short_basis();
    RealMatrix inv = e8.basis().inverse();
    for (const ShellListing &shell : enumerate_shells_upto(e8_gram(), static_cast<long>(std::floor(maxNormSq)))) {
        for (const auto &c : shell.vectors) {
            RealVector w = psi * e8.point(c);
            RealVector coords = inv * w;
            bool integral = true;
            for (Eigen::Index i = 0; i < coords.size() && integral; ++i)
                integral = std::abs(coords[i] - std::nearbyint(coords[i])) <= tol;
            if (integral) return true;
        }
    }
    return false;
}

RealMatrix random_disjoint_rotation(int dim, std::uint64_t seed) {
    require(dim == 8, "random_disjoint_rotation: only dimension 8 is supported");
    for (int attempt = 0; attempt <= 16; ++attempt) {
        std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(attempt));
        std::normal_distribution<double> gauss(0.0, 1.0);
        RealMatrix a(dim, dim);
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) a(i, j) = gauss(rng);
        Eigen::HouseholderQR<RealMatrix> qr(a);
        RealMatrix q = qr.householderQ();
        RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < dim; ++i)
            if (r(i, i) < 0) q.col(i) = -q.col(i);
        if (orthogonality_defect(q) > 1e-10) continue;
        if (!shares_short_vector(q)) return q;
    }
    fail(Status::Generation, "random_disjoint_rotation: every attempt shared a short vector");
}

}  // namespace packstab
