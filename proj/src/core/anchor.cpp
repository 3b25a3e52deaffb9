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

#include "packstab/anchor.hpp"

#include <algorithm>
#include <cstdlib>
#include <random>
#include <thread>

#include "packstab/error.hpp"
#include "packstab/snap.hpp"

namespace packstab {

AnchorOptions AnchorOptions::for_dim(int dim, const MagicConfig &cfg) {
    require(dim == 8 || dim == 24, "AnchorOptions: dimension must be 8 or 24");
    AnchorOptions o;
    o.patchSnapTol = cfg.patchSnapTol;
    o.minDensityFraction = cfg.minDensityFraction;
    if (dim == 24) {
        o.probeNorm = cfg.frameProbeNorm24;
        o.probeTol = cfg.frameTol24;
        o.minNorm = cfg.frameMinNorm24;
        o.maxNorm = cfg.frameMaxNorm24;
        o.detLowLog2 = cfg.frameDetLowLog2_24;
        o.detHighLog2 = 24 * std::log2(cfg.frameMaxNorm24);
        o.productLog2 = cfg.frameProductLog2_24;
        o.patchDetLowLog2 = -140;
        o.reducedNormLog2 = 139;
    }
    return o;
}

AnchorFrame anchor_frame(const PointSource &source, const RealVector &anchor, const Window &window,
                         const AnchorOptions &opt) {
    const std::size_t n = source.dim();
    require(static_cast<std::size_t>(anchor.size()) == n && window.dim() == n, "anchor_frame: dimension mismatch");
    AnchorFrame f;
    auto sa = source.nearest_in_window(anchor, opt.probeTol, window);
    if (!sa) fail(Status::Internal, "saturation violated: no center near the anchor");
    f.center = *sa;
    RealMatrix q(static_cast<Eigen::Index>(n), 0);  // orthonormal basis of the chosen span
    for (std::size_t i = 0; i < n; ++i) {
        RealVector dir;
        double bestLen = -1;
        for (std::size_t j = 0; j < n; ++j) {
            RealVector e = RealVector::Unit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(j));
            if (q.cols()) e -= q * (q.transpose() * e);
            double len = e.norm();
            if (len > bestLen + 1e-12) {
                bestLen = len;
                dir = e;
            }
        }
        RealVector target = f.center + opt.probeNorm * dir / bestLen;
        auto hit = source.nearest_in_window(target, opt.probeTol, window);
        if (!hit) fail(Status::Internal, "saturation violated: no center near a frame probe");
        RealVector v = *hit - f.center;
        f.vectors.push_back(v);
        RealVector w = v;
        if (q.cols()) w -= q * (q.transpose() * w);
        if (w.norm() < 1e-9) fail(Status::Internal, "anchor_frame: degenerate frame");
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = w / w.norm();
    }
    RealMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    f.normsOk = true;
    double logProduct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        m.col(static_cast<Eigen::Index>(i)) = f.vectors[i];
        double len = f.vectors[i].norm();
        logProduct += std::log2(len);
        if (len < opt.minNorm - 1e-12 || len > opt.maxNorm + 1e-12) f.normsOk = false;
    }
    f.absDet = std::abs(m.determinant());
    f.productNorms = std::exp2(logProduct);
    double logDet = std::log2(f.absDet);
    f.detOk = logDet >= opt.detLowLog2 - 1e-12 && logDet <= opt.detHighLog2 + 1e-12;
    f.productOk = logProduct <= opt.productLog2 + logDet + 1e-12;
    return f;
}

namespace {

using i128 = __int128;

i128 floor_mod(i128 a, i128 m) {
    i128 r = a % m;
    return r < 0 ? r + m : r;
}

// Echelon basis of an integer lattice, grown one vector at a time.
class IncrementalHnf {
public:
    explicit IncrementalHnf(std::size_t n) : n_(n), rows_(n), has_(n, false) {}

    // Returns true when w was already in the lattice.
    bool add(std::vector<i128> &w) {
        if (full_) {
            for (auto &x : w)
                if (x > kBig || x < -kBig) {
                    reduce_mod(w);
                    break;
                }
        }
        bool changed = false;
        for (std::size_t c = 0; c < n_; ++c) {
            if (w[c] == 0) continue;
            if (!has_[c]) {
                if (w[c] < 0)
                    for (auto &x : w) x = -x;
                rows_[c] = w;
                has_[c] = true;
                refresh();
                return false;
            }
            std::vector<i128> &r = rows_[c];
            auto wc = static_cast<long long>(w[c]), rc = static_cast<long long>(r[c]);
            if (w[c] == wc && r[c] == rc && wc % rc == 0) {
                i128 qt = wc / rc;
                for (std::size_t k = c; k < n_; ++k) w[k] -= qt * r[k];
                continue;
            }
            // extended gcd on the pivot column
            i128 a = r[c], b = w[c];
            i128 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
            while (b != 0) {
                i128 qt = a / b;
                i128 t = a - qt * b;
                a = b;
                b = t;
                t = x0 - qt * x1;
                x0 = x1;
                x1 = t;
                t = y0 - qt * y1;
                y0 = y1;
                y1 = t;
            }
            // a = x0 r[c] + y0 w[c]; (x1, y1) annihilates the pivot
            std::vector<i128> nr(n_), nw(n_);
            for (std::size_t k = 0; k < n_; ++k) {
                nr[k] = x0 * r[k] + y0 * w[k];
                nw[k] = x1 * r[k] + y1 * w[k];
            }
            if (nr[c] < 0)
                for (auto &x : nr) x = -x;
            r = std::move(nr);
            w = std::move(nw);
            if (full_) {
                reduce_row(r, c);
                reduce_mod(w);
            }
            changed = true;
        }
        if (changed) refresh();
        return !changed;
    }

    bool full() const { return full_; }
    i128 index() const { return det_; }

    IntMatrix matrix() const {
        IntMatrix m(n_, n_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (!has_[i]) continue;
            for (std::size_t k = 0; k < n_; ++k) {
                i128 v = rows_[i][k];
                require(v <= INT64_MAX && v >= INT64_MIN, "IncrementalHnf: entry overflow");
                m(i, k) = mpz_class(static_cast<long>(v));
            }
        }
        return m;
    }

private:
    static constexpr i128 kBig = i128(1) << 40;

    void reduce_mod(std::vector<i128> &w) const {
        for (auto &x : w) x = floor_mod(x, det_);
    }

    void reduce_row(std::vector<i128> &r, std::size_t pivot) const {
        for (std::size_t k = pivot + 1; k < n_; ++k) r[k] = floor_mod(r[k], det_);
    }

    void refresh() {
        bool all = true;
        i128 d = 1;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!has_[i]) {
                all = false;
                break;
            }
            d *= rows_[i][i];
            if (d > (i128(1) << 62)) fail(Status::Numeric, "patch lattice index too large");
        }
        if (!all) return;
        full_ = true;
        det_ = d;
        // reduce above-diagonal entries and keep everything below det
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t k = i + 1; k < n_; ++k) {
                i128 p = rows_[k][k];
                i128 qt = rows_[i][k] >= 0 ? rows_[i][k] / p : -((-rows_[i][k] + p - 1) / p);
                if (qt)
                    for (std::size_t m = k; m < n_; ++m) rows_[i][m] -= qt * rows_[k][m];
            }
        }
    }

    std::size_t n_;
    std::vector<std::vector<i128>> rows_;
    std::vector<bool> has_;
    bool full_ = false;
    i128 det_ = 0;
};

}  // namespace

PatchReconstruction reconstruct_patch_lattice(const PointSource &source, const RealVector &anchor, const Window &window,
                                              const AnchorOptions &opt) {
    const std::size_t n = source.dim();
    const auto ni = static_cast<Eigen::Index>(n);
    PatchReconstruction rec;
    rec.frame = anchor_frame(source, anchor, window, opt);
    RealMatrix v(ni, ni);
    for (std::size_t i = 0; i < n; ++i) v.col(static_cast<Eigen::Index>(i)) = rec.frame.vectors[i];
    rec.dualBasis = v.transpose().inverse();
    const RealMatrix vt = v.transpose();
    IncrementalHnf hnfAcc(n);
    rec.sumV = RealVector::Zero(ni);
    rec.sumL = RealVector::Zero(ni);
    const std::size_t m = n + 1;
    std::vector<double> w(n), lt(m), sumA(m * m, 0.0), sumB(n * m, 0.0), sumV(n, 0.0), sumL(n, 0.0);
    std::vector<i128> l(n);
    const double *vtd = vt.data(), *dual = rec.dualBasis.data(), *ctr = rec.frame.center.data();
    const double tol2 = opt.patchSnapTol * opt.patchSnapTol;
    double maxRes2 = 0;
    source.for_each_in_window(window, [&](const RealVector &x) {
        const double *xd = x.data();
        for (std::size_t k = 0; k < n; ++k) w[k] = xd[k] - ctr[k];
        for (std::size_t i = 0; i < n; ++i) {
            double ip = 0;
            for (std::size_t k = 0; k < n; ++k) ip += vtd[k * n + i] * w[k];
            double r = std::nearbyint(ip);
            l[i] = static_cast<i128>(r);
            lt[i] = r;
        }
        lt[n] = 1;
        double res2 = 0;
        for (std::size_t k = 0; k < n; ++k) {
            double e = -w[k];
            for (std::size_t i = 0; i < n; ++i) e += dual[i * n + k] * lt[i];
            res2 += e * e;
        }
        maxRes2 = std::max(maxRes2, res2);
        if (res2 > tol2) ++rec.residualViolations;
        hnfAcc.add(l);
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b) sumA[a * m + b] += lt[a] * lt[b];
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t k = 0; k < n; ++k) sumB[b * n + k] += w[k] * lt[b];
        for (std::size_t k = 0; k < n; ++k) {
            sumV[k] += w[k];
            sumL[k] += lt[k];
        }
        ++rec.points;
    });
    rec.maxResidual = std::sqrt(maxRes2);
    RealMatrix ata(ni + 1, ni + 1), vta(ni, ni + 1);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            ata(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                ata(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = sumA[a * m + b];
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t k = 0; k < n; ++k) vta(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b)) = sumB[b * n + k];
    for (std::size_t k = 0; k < n; ++k) {
        rec.sumV[static_cast<Eigen::Index>(k)] = sumV[k];
        rec.sumL[static_cast<Eigen::Index>(k)] = sumL[k];
    }
    rec.claimA = rec.residualViolations == 0;
    if (!rec.claimA) fail(Status::Regime, "anchor in bad region");
    if (!hnfAcc.full()) fail(Status::Rank, "patch points do not span the space");
    rec.hnfRows = hnfAcc.matrix();
    RealMatrix affine = ata.ldlt().solve(vta.transpose()).transpose();
    rec.fittedMap = affine.leftCols(ni);
    rec.fittedOffset = affine.col(ni);
    rec.lattice = Lattice(rec.fittedMap * rec.hnfRows.to_real().transpose());
    rec.detL = rec.lattice.det();
    double log2Det = std::log2(rec.detL);
    rec.claimB = log2Det >= opt.patchDetLowLog2 && rec.detL <= 1 + 8 / std::sqrt(window.inradius());
    rec.maxReducedNorm = lll_reduce(rec.lattice).max_basis_norm();
    rec.claimC = std::log2(rec.maxReducedNorm) <= opt.reducedNormLog2;
    return rec;
}

AnchorReport analyze_anchor(const AnchorContext &ctx, const RealVector &anchor, const Window &window) {
    require(ctx.source != nullptr, "analyze_anchor: missing point source");
    const PointSource &src = *ctx.source;
    const std::size_t n = src.dim();
    const auto ni = static_cast<Eigen::Index>(n);
    AnchorReport rep;
    rep.anchor = anchor;
    Window w = window.recentered(anchor);
    double r = w.inradius();
    rep.windowVolume = w.volume();
    rep.pointCount = src.count_in_window(w);
    double fraction = std::max(1 - 4 / std::sqrt(r), ctx.options.minDensityFraction);
    rep.densityThreshold = fraction * rep.windowVolume;
    rep.flags.denseEnough = static_cast<double>(rep.pointCount) >= rep.densityThreshold;
    rep.flags.badSetAvoided = !ctx.badSource || ctx.badSource->count_in_window(w) == 0;
    try {
        PatchReconstruction rec = reconstruct_patch_lattice(src, anchor, w, ctx.options);
        rep.frame = rec.frame.vectors;
        rep.frameOk = rec.frame.ok();
        rep.claimA = rec.claimA;
        rep.claimB = rec.claimB;
        rep.claimC = rec.claimC;
        rep.recoveredLattice = rec.lattice;
        LllResult red = lll_reduce_with_transform(rec.lattice);
        auto k = round_gram(red.lattice.gram_matrix(), 2 * ctx.params.normTol);
        if (!k) {
            rep.failure = "outside stability regime (ε too large)";
            return rep;
        }
        rep.recoveredIdentity = identify_even_unimodular(*k);
        Verdict expected = ctx.dim == 24 ? Verdict::Leech : Verdict::E8;
        rep.flags.identified = rep.recoveredIdentity.verdict == expected;
        SnapResult snap = snap_to_integral_gram(red.lattice.basis(), *k);
        rep.snappedBasis = snap.snappedBasis;
        // l -> snapped point: Vsnap T^{-1} (H^t)^{-1} l
        RealMatrix g = snap.snappedBasis * red.transform.to_real().inverse() *
                       rec.hnfRows.to_real().transpose().inverse();
        RealVector t = (rec.sumV - g * rec.sumL) / static_cast<double>(rec.points);
        const RealMatrix vt = [&] {
            RealMatrix m(ni, ni);
            for (std::size_t i = 0; i < n; ++i) m.col(static_cast<Eigen::Index>(i)) = rec.frame.vectors[i];
            return RealMatrix(m.transpose());
        }();
        rep.matchedStored = rec.points <= ctx.options.matchedBudget;
        double worst = 0;
        RealVector l(ni), v(ni), ip(ni), z(ni);
        src.for_each_in_window(w, [&](const RealVector &x) {
            v.noalias() = x - rec.frame.center;
            ip.noalias() = vt * v;
            for (Eigen::Index i = 0; i < ni; ++i) l[i] = std::nearbyint(ip[i]);
            z.noalias() = g * l;
            z += t;
            worst = std::max(worst, (v - z).norm());
            if (rep.matchedStored) rep.matchedZ.push_back(rec.frame.center + z);
        });
        rep.hausdorff = worst;
        double sep = std::sqrt(ctx.dim == 24 ? 4.0 : 2.0);
        rep.hausdorffExact = worst < sep / 2;
        Lattice ref(snap.snappedBasis);
        rep.latticeCount = count_lattice_points(ref, -(rec.frame.center + t), w);
        rep.gapRatio = rep.latticeCount
                           ? std::abs(static_cast<double>(rep.pointCount) / static_cast<double>(rep.latticeCount) - 1)
                           : std::numeric_limits<double>::infinity();
    } catch (const Error &e) {
        rep.failure = e.what();
        rep.flags.identified = false;
    }
    return rep;
}

std::vector<RealVector> sample_fundamental(const Lattice &period, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RealVector> out;
    const auto n = static_cast<Eigen::Index>(period.dim());
    for (std::size_t k = 0; k < count; ++k) {
        RealVector c(n);
        for (Eigen::Index i = 0; i < n; ++i) c[i] = u(rng);
        out.push_back(period.basis() * c);
    }
    return out;
}

std::vector<RealVector> sample_box(const Window &region, std::size_t count, std::uint64_t seed) {
    require(region.shape == WindowShape::Box, "sample_box: region must be a box");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<RealVector> out;
    for (std::size_t k = 0; k < count; ++k) {
        RealVector c = region.center;
        for (Eigen::Index i = 0; i < c.size(); ++i) c[i] += u(rng) * region.halfWidths[i];
        out.push_back(c);
    }
    return out;
}

double wilson_half_width(std::size_t successes, std::size_t trials) {
    if (trials < 2) return 1.0;
    const double z = 1.959963984540054;
    double nn = static_cast<double>(trials);
    double p = static_cast<double>(successes) / nn;
    double denom = 1 + z * z / nn;
    return z / denom * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn));
}

unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char *env = std::getenv("PACKSTAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
    }
    return hw;
}

static double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

AnchorSummary analyze_anchors(const AnchorContext &ctx, const std::vector<RealVector> &anchors, const Window &window) {
    AnchorSummary s;
    s.reports.resize(anchors.size());
    unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(1, anchors.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < anchors.size(); ++i) s.reports[i] = analyze_anchor(ctx, anchors[i], window);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < anchors.size(); i += workers)
                    s.reports[i] = analyze_anchor(ctx, anchors[i], window);
            });
        for (auto &t : pool) t.join();
    }
    std::vector<double> hs, gs;
    for (const AnchorReport &r : s.reports) {
        if (r.flags.all()) ++s.successes;
        if (r.flags.identified) {
            hs.push_back(r.hausdorff);
            gs.push_back(r.gapRatio);
        }
    }
    s.fraction = anchors.empty() ? 0 : static_cast<double>(s.successes) / static_cast<double>(anchors.size());
    s.halfWidth = wilson_half_width(s.successes, anchors.size());
    s.lowConfidence = anchors.size() < 2;
    s.medianHausdorff = median(hs);
    s.medianGapRatio = median(gs);
    return s;
}

AnchorSummary sample_anchors(const AnchorContext &ctx, const Lattice &period, const Window &window, std::size_t count,
                             std::uint64_t seed) {
    require(count >= 1, "sample_anchors: count must be at least 1");
    return analyze_anchors(ctx, sample_fundamental(period, count, seed), window);
}

}  // namespace packstab
