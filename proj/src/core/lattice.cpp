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

#include "packstab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "packstab/error.hpp"

namespace packstab {

Lattice::Lattice(RealMatrix basis) : basis_(std::move(basis)) {
    require(basis_.rows() == basis_.cols() && basis_.rows() > 0, "Lattice: basis must be n x n");
    require(basis_.allFinite(), "Lattice: non-finite basis entry");
    Eigen::FullPivLU<RealMatrix> lu(basis_);
    if (lu.rank() < basis_.rows()) fail(Status::Rank, "Lattice: singular basis");
}

double Lattice::det() const { return std::abs(basis_.determinant()); }

RealVector Lattice::point(const std::vector<long> &coeffs) const {
    require(coeffs.size() == dim(), "Lattice::point: coefficient length mismatch");
    RealVector v = RealVector::Zero(basis_.rows());
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i]) v += static_cast<double>(coeffs[i]) * basis_.col(static_cast<Eigen::Index>(i));
    return v;
}

double Lattice::max_basis_norm() const { return basis_.colwise().norm().maxCoeff(); }

double Lattice::norm_product() const {
    double p = 1;
    for (Eigen::Index i = 0; i < basis_.cols(); ++i) p *= basis_.col(i).norm();
    return p;
}

BallEnumerator::BallEnumerator(const RealMatrix &basis) : n_(static_cast<int>(basis.cols())), basis_(basis) {
    require(basis.rows() == basis.cols() && basis.rows() > 0, "BallEnumerator: basis must be n x n");
    inverse_ = basis.inverse();
    UpperTriangular r = cholesky_upper(gram(basis));
    rdiag2_.resize(n_);
    mu_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    for (int k = 0; k < n_; ++k) {
        rdiag2_[k] = r(k, k) * r(k, k);
        for (int j = k + 1; j < n_; ++j) mu_[static_cast<std::size_t>(k) * n_ + j] = r(k, j) / r(k, k);
    }
}

std::uint64_t BallEnumerator::count(const double *t, double radiusSq, std::uint64_t budget) const {
    const int n = n_;
    if (radiusSq < 0) return 0;
    const double r2 = radiusSq;
    if (n == 1) {
        double w = std::sqrt(r2 / rdiag2_[0]);
        double lo = std::ceil(t[0] - w), up = std::floor(t[0] + w);
        return up >= lo ? static_cast<std::uint64_t>(up - lo + 1) : 0;
    }
    std::vector<long> x(n), hi(n);
    std::vector<double> c(n), partial(n + 1, 0.0);
    std::uint64_t nodes = 0, total = 0;
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
    if (!open_level(k)) return 0;
    const double *mu0 = &mu_[0];
    const double inv0 = 1.0 / rdiag2_[0];
    while (true) {
        if (x[k] > hi[k]) {
            ++k;
            if (k == n) return total;
            ++x[k];
            continue;
        }
        if (++nodes > budget) fail(Status::Resource, "enumeration node budget exceeded");
        double d = static_cast<double>(x[k]) - c[k];
        partial[k] = partial[k + 1] + rdiag2_[k] * d * d;
        if (k == 1) {
            // close the innermost level by counting integers in an interval
            double c0 = t[0];
            for (int j = 2; j < n; ++j) c0 -= mu0[j] * (static_cast<double>(x[j]) - t[j]);
            const double m01 = mu0[1], t1 = t[1];
            double p2 = partial[2];
            const double rd1 = rdiag2_[1];
            const double c1 = c[1];
            for (long v = x[1]; v <= hi[1]; ++v) {
                double d1 = static_cast<double>(v) - c1;
                double rem = r2 - p2 - rd1 * d1 * d1;
                if (rem < 0) continue;
                double w = std::sqrt(rem * inv0);
                double cc = c0 - m01 * (static_cast<double>(v) - t1);
                double lo = std::ceil(cc - w), up = std::floor(cc + w);
                if (up >= lo) total += static_cast<std::uint64_t>(up - lo + 1);
            }
            nodes += static_cast<std::uint64_t>(hi[1] - x[1]);
            x[1] = hi[1] + 1;
            continue;
        }
        if (open_level(k - 1)) {
            --k;
        } else {
            ++x[k];
        }
    }
}

double lll_bound(std::size_t n) { return std::pow(2.0, static_cast<double>(n * (n - 1)) / 4.0); }

namespace {

bool mul_add_overflow(long a, long q, long b, long &out) {
    // out = a - q*b
    long prod;
    if (__builtin_mul_overflow(q, b, &prod)) return true;
    return __builtin_sub_overflow(a, prod, &out);
}

}  // namespace

LllResult lll_reduce_with_transform(const Lattice &lat, double delta) {
    require(delta > 0.25 && delta < 1.0, "lll_reduce: delta must lie in (1/4, 1)");
    const int n = static_cast<int>(lat.dim());
    RealMatrix b = lat.basis();
    std::vector<std::vector<long>> t(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i) t[i][i] = 1;  // t[col][row]
    RealMatrix bstar(b.rows(), n);
    std::vector<double> bnorm(n);
    RealMatrix mu = RealMatrix::Zero(n, n);

    auto gs_row = [&](int k) {
        RealVector v = b.col(k);
        for (int j = 0; j < k; ++j) {
            mu(k, j) = b.col(k).dot(bstar.col(j)) / bnorm[j];
            v -= mu(k, j) * bstar.col(j);
        }
        bstar.col(k) = v;
        bnorm[k] = v.squaredNorm();
        if (!(bnorm[k] > 0)) fail(Status::Numeric, "lll_reduce: basis became numerically dependent");
    };
    auto sub_col = [&](int k, int j, long q) {
        b.col(k) -= static_cast<double>(q) * b.col(j);
        for (int r = 0; r < n; ++r) {
            long out;
            if (mul_add_overflow(t[k][r], q, t[j][r], out)) fail(Status::Numeric, "lll_reduce: transform overflow");
            t[k][r] = out;
        }
    };

    gs_row(0);
    int k = 1;
    std::uint64_t iterations = 0;
    while (k < n) {
        if (++iterations > 1000000ull * static_cast<std::uint64_t>(n)) fail(Status::Numeric, "lll_reduce: no convergence");
        gs_row(k);
        for (int pass = 0; pass < 4; ++pass) {
            bool changed = false;
            for (int j = k - 1; j >= 0; --j) {
                if (std::abs(mu(k, j)) <= 0.5) continue;
                double qd = std::nearbyint(mu(k, j));
                if (std::abs(qd) > 9e15) fail(Status::Numeric, "lll_reduce: coefficient overflow");
                long q = static_cast<long>(qd);
                sub_col(k, j, q);
                for (int i = 0; i < j; ++i) mu(k, i) -= qd * mu(j, i);
                mu(k, j) -= qd;
                changed = true;
            }
            if (!changed) break;
            gs_row(k);
        }
        double m = mu(k, k - 1);
        if (bnorm[k] >= (delta - m * m) * bnorm[k - 1]) {
            ++k;
        } else {
            b.col(k).swap(b.col(k - 1));
            std::swap(t[k], t[k - 1]);
            if (k == 1) {
                gs_row(0);
            } else {
                --k;
            }
        }
    }
    IntMatrix tm(n, n);
    for (int c = 0; c < n; ++c)
        for (int r = 0; r < n; ++r) tm(r, c) = t[c][r];
    Lattice reduced(lat.basis() * tm.to_real());
    return {reduced, tm};
}

Lattice lll_reduce(const Lattice &lat) { return lll_reduce_with_transform(lat).lattice; }

RealMatrix dual_basis(const Lattice &lat) { return lat.basis().transpose().inverse(); }

RealVector coords_in_basis(const RealVector &x, const Lattice &lat) {
    require(static_cast<std::size_t>(x.size()) == lat.dim(), "coords_in_basis: dimension mismatch");
    return lat.basis().fullPivLu().solve(x);
}

RealVector coords_in_basis(const RealVector &x, const Lattice &lat, const DualBasisHypothesis &h) {
    RealVector lambda = coords_in_basis(x, lat);
    const double bound = h.rho / h.d * x.norm();
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
        if (std::abs(lambda[i]) > bound * (1 + 1e-12) + 1e-12)
            fail(Status::Internal, "coords_in_basis: coefficient exceeds the dual-basis bound");
    return lambda;
}

namespace {

std::vector<long> map_coeffs(const IntMatrix &t, const long *x, std::size_t n) {
    std::vector<long> out(n, 0);
    for (std::size_t r = 0; r < n; ++r) {
        long acc = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (!x[c]) continue;
            long term;
            if (__builtin_mul_overflow(t.get_long(r, c), x[c], &term) || __builtin_add_overflow(acc, term, &acc))
                fail(Status::Numeric, "coefficient overflow");
        }
        out[r] = acc;
    }
    return out;
}

}  // namespace

ShortestVector shortest_vector(const Lattice &lat, double normSqCap, std::uint64_t budget) {
    LllResult red = lll_reduce_with_transform(lat);
    const RealMatrix &b = red.lattice.basis();
    const std::size_t n = lat.dim();
    double first = b.col(0).squaredNorm();
    double cap = std::isfinite(normSqCap) ? normSqCap : first;
    require(cap >= first * (1 - 1e-12), "shortest_vector: normSqCap below the first reduced vector");
    cap = std::min(cap, first);
    BallEnumerator en(b);
    std::vector<double> zero(n, 0.0);
    double best = cap * (1 + 1e-9);
    std::vector<std::vector<long>> ties;
    std::vector<double> tieNorm;
    en.visit(zero.data(), cap, [&](const long *x, double) {
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) nonzero |= x[i] != 0;
        if (!nonzero) return;
        RealVector v = RealVector::Zero(b.rows());
        for (std::size_t i = 0; i < n; ++i)
            if (x[i]) v += static_cast<double>(x[i]) * b.col(static_cast<Eigen::Index>(i));
        double ns = v.squaredNorm();
        if (ns > best * (1 + 1e-9)) return;
        ties.push_back(map_coeffs(red.transform, x, n));
        tieNorm.push_back(ns);
        best = std::min(best, ns);
    }, budget);
    if (ties.empty()) fail(Status::Internal, "shortest_vector: enumeration found no nonzero vector");
    std::size_t pick = ties.size();
    for (std::size_t i = 0; i < ties.size(); ++i) {
        if (tieNorm[i] > best * (1 + 1e-9)) continue;
        if (pick == ties.size() || ties[i] < ties[pick]) pick = i;
    }
    ShortestVector sv;
    sv.coeffs = ties[pick];
    sv.vector = lat.point(sv.coeffs);
    sv.length = std::sqrt(best);
    return sv;
}

ShellListing enumerate_shell(const Lattice &lat, double normSq, double tol, std::uint64_t budget) {
    require(normSq > 0, "enumerate_shell: normSq must be positive");
    require(tol >= 0, "enumerate_shell: tol must be nonnegative");
    LllResult red = lll_reduce_with_transform(lat);
    const RealMatrix &b = red.lattice.basis();
    const std::size_t n = lat.dim();
    BallEnumerator en(b);
    std::vector<double> zero(n, 0.0);
    ShellListing out;
    out.normSq = normSq;
    en.visit(zero.data(), normSq + tol, [&](const long *x, double) {
        RealVector v = RealVector::Zero(b.rows());
        for (std::size_t i = 0; i < n; ++i)
            if (x[i]) v += static_cast<double>(x[i]) * b.col(static_cast<Eigen::Index>(i));
        if (std::abs(v.squaredNorm() - normSq) <= tol) out.vectors.push_back(map_coeffs(red.transform, x, n));
    }, budget);
    std::sort(out.vectors.begin(), out.vectors.end());
    out.count = out.vectors.size();
    return out;
}

Lattice lattice_from_gram(const IntGram &g) {
    UpperTriangular r = cholesky_upper(SymRealMatrix(g.to_real()));
    return Lattice(r.matrix());
}

IntMatrix lll_gram_transform(const IntGram &g, double delta) {
    return lll_reduce_with_transform(lattice_from_gram(g), delta).transform;
}

namespace {

struct ExactEnumeration {
    IntMatrix t;
    std::vector<std::int64_t> gred;  // reduced Gram, row major
    std::size_t n;
    RealMatrix basis;
};

ExactEnumeration prepare_exact(const IntGram &g) {
    ExactEnumeration e;
    e.n = g.n();
    e.t = lll_gram_transform(g);
    IntMatrix gr = e.t.transpose() * g.matrix() * e.t;
    e.gred.resize(e.n * e.n);
    for (std::size_t i = 0; i < e.n; ++i)
        for (std::size_t j = 0; j < e.n; ++j) {
            if (!gr(i, j).fits_slong_p() || abs(gr(i, j)) > mpz_class(1L << 40))
                fail(Status::Numeric, "enumerate_shell: reduced Gram entries too large");
            e.gred[i * e.n + j] = gr(i, j).get_si();
        }
    e.basis = cholesky_upper(SymRealMatrix(gr.to_real())).matrix();
    return e;
}

__int128 exact_norm(const ExactEnumeration &e, const long *x) {
    __int128 s = 0;
    for (std::size_t i = 0; i < e.n; ++i) {
        if (!x[i]) continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < e.n; ++j) row += static_cast<__int128>(e.gred[i * e.n + j]) * x[j];
        s += row * x[i];
    }
    return s;
}

}  // namespace

ShellListing enumerate_shell(const IntGram &g, long normSq, std::uint64_t budget) {
    require(normSq > 0, "enumerate_shell: normSq must be positive");
    ExactEnumeration e = prepare_exact(g);
    BallEnumerator en(e.basis);
    std::vector<double> zero(e.n, 0.0);
    ShellListing out;
    out.normSq = static_cast<double>(normSq);
    en.visit(zero.data(), static_cast<double>(normSq), [&](const long *x, double) {
        if (exact_norm(e, x) == normSq) out.vectors.push_back(map_coeffs(e.t, x, e.n));
    }, budget);
    std::sort(out.vectors.begin(), out.vectors.end());
    out.count = out.vectors.size();
    return out;
}

std::vector<ShellListing> enumerate_shells_upto(const IntGram &g, long maxNormSq, std::uint64_t budget) {
    ExactEnumeration e = prepare_exact(g);
    BallEnumerator en(e.basis);
    std::vector<double> zero(e.n, 0.0);
    std::map<long, std::vector<std::vector<long>>> shells;
    en.visit(zero.data(), static_cast<double>(maxNormSq), [&](const long *x, double) {
        __int128 ns = exact_norm(e, x);
        if (ns > 0 && ns <= maxNormSq) shells[static_cast<long>(ns)].push_back(map_coeffs(e.t, x, e.n));
    }, budget);
    std::vector<ShellListing> out;
    for (auto &[ns, vecs] : shells) {
        ShellListing s;
        s.normSq = static_cast<double>(ns);
        s.vectors = std::move(vecs);
        std::sort(s.vectors.begin(), s.vectors.end());
        s.count = s.vectors.size();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ShellListing> enumerate_shells_upto(const Lattice &lat, double maxNormSq, double tol, std::uint64_t budget) {
    LllResult red = lll_reduce_with_transform(lat);
    const RealMatrix &b = red.lattice.basis();
    const std::size_t n = lat.dim();
    BallEnumerator en(b);
    std::vector<double> zero(n, 0.0);
    std::vector<std::pair<double, std::vector<long>>> found;
    en.visit(zero.data(), maxNormSq + tol, [&](const long *x, double) {
        RealVector v = RealVector::Zero(b.rows());
        for (std::size_t i = 0; i < n; ++i)
            if (x[i]) v += static_cast<double>(x[i]) * b.col(static_cast<Eigen::Index>(i));
        double ns = v.squaredNorm();
        if (ns > tol && ns <= maxNormSq + tol) found.emplace_back(ns, map_coeffs(red.transform, x, n));
    }, budget);
    std::sort(found.begin(), found.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
    std::vector<ShellListing> out;
    for (std::size_t i = 0; i < found.size();) {
        std::size_t j = i;
        ShellListing s;
        s.normSq = found[i].first;
        while (j < found.size() && found[j].first - found[i].first <= tol) s.vectors.push_back(found[j++].second);
        std::sort(s.vectors.begin(), s.vectors.end());
        s.count = s.vectors.size();
        out.push_back(std::move(s));
        i = j;
    }
    return out;
}

double center_density(const Lattice &lat, double radius) {
    require(radius > 0, "center_density: radius must be positive");
    ShortestVector sv = shortest_vector(lat);
    if (sv.length < 2 * radius * (1 - 1e-12)) {
        std::ostringstream os;
        os << "lattice vector with coefficients (";
        for (std::size_t i = 0; i < sv.coeffs.size(); ++i) os << (i ? "," : "") << sv.coeffs[i];
        os << ") is shorter than 2*radius";
        throw PackingViolationError(0, 1, sv.length, os.str());
    }
    return 1.0 / lat.det();
}

}  // namespace packstab
