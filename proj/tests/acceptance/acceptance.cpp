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
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "packstab/anchor.hpp"
#include "packstab/bins.hpp"
#include "packstab/error.hpp"
#include "packstab/generators.hpp"
#include "packstab/magic.hpp"
#include "packstab/reference.hpp"
#include "packstab/snap.hpp"
#include "packstab/stability.hpp"
#include "support.hpp"

using namespace packstab;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

class Detail {
public:
    template <class T>
    Detail &operator<<(const T &v) {
        out_ << v;
        return *this;
    }
    std::string str() const { return out_.str(); }
    operator std::string() const { return out_.str(); }

private:
    std::ostringstream out_;
};

// Vectors of E8 in standard coordinates: all integer or all half-odd, with even coordinate sum.
bool in_standard_e8(const RealVector &v) {
    double twice = 0;
    bool integral = true, half = true;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        double x = v[i];
        double r = std::nearbyint(x);
        double h = std::nearbyint(x - 0.5) + 0.5;
        integral = integral && std::abs(x - r) < 1e-9;
        half = half && std::abs(x - h) < 1e-9;
        twice += 2 * x;
    }
    if (!integral && !half) return false;
    return std::abs(std::fmod(std::nearbyint(twice), 4.0)) < 0.5;
}

bool exact_even_unimodular(const IntGram &g) {
    for (std::size_t i = 0; i < g.n(); ++i)
        if (g(i, i).get_si() % 2 != 0) return false;
    return bareiss_det(g.matrix()) == 1;
}

Outcome reference_invariants() {
    Detail d;
    bool ok = true;
    IntGram e8 = e8_gram();
    ok = ok && exact_even_unimodular(e8) && is_even_unimodular(e8) && e8.det() == 1;
    ShellListing e8Two = enumerate_shell(e8, 2);
    Lattice e8Basis = e8_short_basis();
    std::size_t standard = 0;
    for (const auto &c : e8Two.vectors) standard += in_standard_e8(e8Basis.point(c));
    ok = ok && e8Two.count == 240 && standard == 240 && std::abs(e8Basis.det() - 1) < 1e-12;
    d << "E8 norm2=" << e8Two.count << " standardForm=" << standard;

    IntGram leech = leech_gram();
    ok = ok && exact_even_unimodular(leech) && is_even_unimodular(leech) && leech.det() == 1;
    ShellListing two = enumerate_shell(leech, 2);
    ShellListing four = enumerate_shell(leech, 4);
    IntMatrix b = leech_integer_basis();
    mpz_class det = bareiss_det(b);
    // sqrt(8)^24 = 2^36
    ok = ok && abs(det) == mpz_class(1) << 36;
    ok = ok && two.count == 0 && four.count == 196560;
    d << "; Leech norm2=" << two.count << " norm4=" << four.count;
    return {ok, d.str()};
}

Outcome lll_bounds() {
    testing::Rng rng(20001);
    std::size_t violations = 0, trials = 0;
    double worst = -1e300;
    std::vector<std::pair<const char *, Lattice>> refs = {
        {"Z8", Lattice(RealMatrix::Identity(8, 8))}, {"E8", e8_short_basis()}, {"Leech", leech_basis()}};
    for (const auto &[name, ref] : refs) {
        const std::size_t n = ref.dim();
        for (int t = 0; t < 200; ++t) {
            IntMatrix u = testing::random_unimodular(n, rng, 4 * n, 40);
            Lattice input = ref.with_basis_change(u);
            LllResult r = lll_reduce_with_transform(input);
            ++trials;
            double detAbs = std::abs(ref.det());
            double lhs = testing::log2_norm_product(r.lattice.basis());
            double rhs = static_cast<double>(n * (n - 1)) / 4 + std::log2(detAbs);
            worst = std::max(worst, lhs - rhs);
            bool basisOk = is_unimodular(r.transform) &&
                           (input.basis() * r.transform.to_real() - r.lattice.basis()).cwiseAbs().maxCoeff() <
                               1e-8 * (1 + input.basis().cwiseAbs().maxCoeff());
            if (lhs > rhs + 1e-9 || !basisOk) ++violations;
        }
    }
    return {violations == 0, Detail() << trials << " transforms, violations=" << violations
                                      << ", max log2(prod/bound)=" << fmt("%.3f", worst)};
}

Outcome dual_basis_bounds() {
    testing::Rng rng(20002);
    std::uniform_int_distribution<int> dimPick(2, 8);
    std::size_t violations = 0, instances = 0;
    while (instances < 10000) {
        const std::size_t n = static_cast<std::size_t>(dimPick(rng));
        RealMatrix b = testing::random_gaussian(n, n, rng);
        double d = 1e300, D = 0, prod = 1;
        for (Eigen::Index i = 0; i < b.cols(); ++i) {
            double len = b.col(i).norm();
            d = std::min(d, len);
            D = std::max(D, len);
            prod *= len;
        }
        double rho = prod / std::abs(b.determinant());
        if (!(rho < 1e6)) continue;
        ++instances;
        Lattice lat(b);
        RealMatrix inv = b.inverse();
        RealMatrix dual = dual_basis(lat);
        const double slack = 1e-9;
        bool ok = (dual - inv.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * rho * inv.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < inv.rows(); ++i) {
            double len = inv.row(i).norm();
            ok = ok && len >= (1 / D) * (1 - slack) && len <= (rho / d) * (1 + slack);
        }
        RealVector x = testing::random_gaussian(n, 1, rng).col(0) * std::exp2(dimPick(rng) - 5);
        RealVector oracle = inv * x;
        DualBasisHypothesis h{d, D, rho};
        try {
            RealVector lambda = coords_in_basis(x, lat, h);
            ok = ok && (lambda - oracle).cwiseAbs().maxCoeff() <= 1e-8 * rho * (1 + x.norm());
        } catch (const Error &) {
            ok = false;
        }
        for (Eigen::Index i = 0; i < oracle.size(); ++i)
            ok = ok && std::abs(oracle[i]) <= (rho / d) * x.norm() * (1 + slack);
        violations += !ok;
    }
    return {violations == 0, Detail() << instances << " instances, violations=" << violations};
}

Outcome determinant_bound() {
    testing::Rng rng(20003);
    const int dims[] = {2, 3, 8};
    std::uniform_real_distribution<double> um(1, 3), ueLog(-9, -1);
    std::size_t violations = 0;
    double worst = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = dims[trial % 3];
        const double m = um(rng), eps = std::pow(10.0, ueLog(rng));
        RealMatrix u = testing::random_gaussian(n, n, rng);
        std::uniform_real_distribution<double> shrink(0, 1);
        for (Eigen::Index i = 0; i < n; ++i) u.col(i) *= m * shrink(rng) / u.col(i).norm();
        RealMatrix e = testing::random_gaussian(n, n, rng);
        for (Eigen::Index i = 0; i < n; ++i) e.col(i) *= eps * shrink(rng) / e.col(i).norm();
        RealMatrix v = u + e;
        double bound = det_perturbation_bound(m, eps, n);
        double oracle = std::exp2(n) * std::pow(m, n - 1) * eps;
        double diff = std::abs(static_cast<long double>(v.determinant()) - static_cast<long double>(u.determinant()));
        double roundoff = 1e-13 * std::pow(m + eps, n);
        worst = std::max(worst, diff / bound);
        if (std::abs(bound - oracle) > 1e-12 * oracle || diff > bound + roundoff) ++violations;
    }
    return {violations == 0, Detail() << "10000 trials, violations=" << violations
                                      << ", max diff/bound=" << fmt("%.3g", worst)};
}

double gamma_oracle(int n, double m) {
    return std::sqrt(2.0) * std::pow(n, 3.5 + n) * m * m * std::pow(m * m + 1, n);
}

IntGram random_even_gram2(testing::Rng &rng, double m) {
    const long maxDiag = static_cast<long>(m * m);
    std::uniform_int_distribution<long> diag(1, maxDiag / 2 - 1);
    while (true) {
        long a = 2 * diag(rng), c = 2 * diag(rng);
        long lim = static_cast<long>(std::floor(std::sqrt(static_cast<double>(a * c))));
        std::uniform_int_distribution<long> off(-lim, lim);
        long b = off(rng);
        if (a * c - b * b <= 0) continue;
        return IntGram(IntMatrix{{a, b}, {b, c}});
    }
}

Outcome snap_bounds() {
    testing::Rng rng(20005);
    std::size_t violations = 0, trials = 0;
    double worstRatio = 0;
    struct Case {
        int n;
        double m;
    };
    for (Case cs : {Case{2, 4.0}, Case{8, std::exp2(15.0)}}) {
        for (int t = 0; t < 100; ++t) {
            IntGram k;
            if (cs.n == 2) {
                k = random_even_gram2(rng, cs.m);
            } else {
                IntMatrix u = testing::random_unimodular(8, rng, 64, 40);
                k = e8_gram().transformed(u);
            }
            RealMatrix exact = testing::random_orthogonal(cs.n, rng) * lattice_from_gram(k).basis();
            RealMatrix pert = exact + testing::uniform_noise(cs.n, cs.n, 1.0, rng);
            // scale the perturbation so the Gram deviation lands in (0, 1e-5]
            double scale = 1e-6;
            RealMatrix u;
            double eps = 0;
            for (int it = 0; it < 60; ++it) {
                u = exact + scale * (pert - exact);
                eps = (gram(u).matrix() - k.to_real()).cwiseAbs().maxCoeff();
                if (eps <= 1e-5) break;
                scale /= 2;
            }
            double normMax = 0;
            for (Eigen::Index i = 0; i < u.cols(); ++i) normMax = std::max(normMax, u.col(i).norm());
            bool ok = eps <= 1e-5 && normMax <= cs.m;
            SnapResult s = snap_to_integral_gram(u, k);
            double disp = 0;
            for (Eigen::Index i = 0; i < u.cols(); ++i) disp = std::max(disp, (s.snappedBasis.col(i) - u.col(i)).norm());
            double gamma = gamma_oracle(cs.n, cs.m);
            ok = ok && std::abs(gamma_M(cs.n, cs.m) - gamma) <= 1e-9 * gamma;
            ok = ok && disp <= gamma * eps && std::abs(disp - s.maxDisplacement) <= 1e-12 * (1 + disp);
            RealMatrix g = gram(s.snappedBasis).matrix();
            double scaleK = k.to_real().cwiseAbs().maxCoeff();
            auto rounded = round_gram(SymRealMatrix(g), 1e-6 * std::max(1.0, scaleK));
            ok = ok && rounded && *rounded == k && (g - k.to_real()).cwiseAbs().maxCoeff() <= 1e-9 * scaleK;
            worstRatio = std::max(worstRatio, eps > 0 ? disp / eps : 0.0);
            ++trials;
            violations += !ok;
        }
    }
    return {violations == 0, Detail() << trials << " trials, violations=" << violations
                                      << ", max displacement/eps=" << fmt("%.3g", worstRatio)};
}

// Q (reference + noise) T: the lattice itself lies within delta of a rotated reference.
Lattice perturbed_scrambled(const Lattice &reference, double delta, testing::Rng &rng) {
    const std::size_t n = reference.dim();
    RealMatrix q = testing::random_orthogonal(n, rng);
    RealMatrix b = q * (reference.basis() + testing::uniform_noise(n, n, delta, rng));
    return Lattice(b * testing::random_unimodular(n, rng).to_real());
}

Outcome pipeline_identification() {
    testing::Rng rng(20006);
    std::size_t good = 0, total = 0;
    double worst = 0;
    std::string firstFailure;
    auto run = [&](const Lattice &ref, int dim, double delta, int count, Verdict expect) {
        ToleranceParams p = make_tolerance_params(1e-3, dim);
        for (int t = 0; t < count; ++t) {
            ++total;
            Lattice lat = perturbed_scrambled(ref, delta, rng);
            try {
                StabilityCertificate c = certify_lattice(lat, dim, p);
                double err = 0;
                for (Eigen::Index i = 0; i < c.pairedBasisL.cols(); ++i)
                    err = std::max(err, (c.pairedBasisL.col(i) - c.pairedBasisRef.col(i)).norm());
                bool paired = c.status == CertificateStatus::Certified && c.pairedBasisL.cols() == dim &&
                              is_unimodular(c.inputCoordinates) &&
                              (lat.basis() * c.inputCoordinates.to_real() - c.pairedBasisL).cwiseAbs().maxCoeff() < 1e-9;
                bool ok = c.identity.verdict == expect && paired && err <= 1e-4 && c.maxError <= 1e-4;
                worst = std::max(worst, err);
                if (ok)
                    ++good;
                else if (firstFailure.empty())
                    firstFailure = to_string(c.status) + "/" + to_string(c.identity.verdict);
            } catch (const Error &e) {
                if (firstFailure.empty()) firstFailure = e.what();
            }
        }
    };
    run(e8_short_basis(), 8, 1e-7, 50, Verdict::E8);
    run(leech_short_basis(), 24, 1e-8, 20, Verdict::Leech);
    Detail d;
    d << good << "/" << total << " certified, max paired error=" << fmt("%.3g", worst);
    if (!firstFailure.empty()) d << ", first failure: " << firstFailure;
    return {good == total, d.str()};
}

struct PatchRun {
    AnchorSummary summary;
    std::size_t badCosets = 0;
};

PatchRun run_patch(PeriodicConfig cfg, const Window &window, std::size_t anchors, std::uint64_t seed, bool saturated) {
    const ToleranceParams p = make_tolerance_params(1e-3, 8);
    if (saturated) cfg = saturate(cfg);
    std::vector<std::size_t> bad = cfg.size() ? bad_set(cfg, p.normTol, p.searchRadius) : std::vector<std::size_t>{};
    PeriodicSource source(cfg);
    std::optional<PeriodicSource> badSource;
    if (!bad.empty()) badSource.emplace(cfg, bad);
    AnchorContext ctx;
    ctx.source = &source;
    ctx.badSource = badSource ? &*badSource : nullptr;
    ctx.dim = 8;
    ctx.params = p;
    ctx.options = AnchorOptions::for_dim(8);
    return {sample_anchors(ctx, cfg.period, window, anchors, seed), bad.size()};
}

Outcome periodic_ground_truth() {
    const double R = 6;
    Window window = Window::ball(RealVector::Zero(8), R);
    bool ok = true;
    Detail d;
    for (double delta : {0.0, 1e-6}) {
        PeriodicConfig cfg = generate_perturbed_config(e8_short_basis(), 2, delta, 0.0, 7);
        PatchRun run = run_patch(cfg, window, 20, 11, true);
        double hausBound = 10 * delta * std::sqrt(8.0) + 1e-9;
        double gapBound = 300 / std::sqrt(R);
        double maxHaus = 0, maxGap = 0;
        for (const AnchorReport &r : run.summary.reports) {
            maxHaus = std::max(maxHaus, r.hausdorff);
            maxGap = std::max(maxGap, r.gapRatio);
        }
        bool pass = run.summary.reports.size() == 20 && run.summary.successes == 20 && maxHaus <= hausBound &&
                    maxGap <= gapBound;
        ok = ok && pass;
        d << "delta=" << fmt("%g", delta) << ": " << run.summary.successes << "/20, hausdorff<=" << fmt("%.3g", maxHaus)
          << ", gap<=" << fmt("%.3g", maxGap) << "; ";
    }
    return {ok, d.str()};
}

Outcome example_reproduction() {
    Window window = Window::ball(RealVector::Zero(8), 6);
    bool densityOk = true, holesOk = true;
    double fittedC = 0;
    std::size_t latticeAnchors = 0, identified = 0, holeAnchors = 0, holeDense = 0;
    for (int R : {2, 3, 4}) {
        ExamplePacking ex = generate_example_packing(R, 17);
        double oracle = static_cast<double>(ex.config.size()) / std::pow(static_cast<double>(R), 16);
        densityOk = densityOk && std::abs(ex.config.center_density() - oracle) <= 1e-12;
        fittedC = std::max(fittedC, R * (1 - oracle));
        PatchRun run = run_patch(ex.config, window, 20, 100 + static_cast<std::uint64_t>(R), false);
        for (const AnchorReport &r : run.summary.reports) {
            BlockLabel label = ex.label_at(r.anchor);
            if (label == BlockLabel::Hole) {
                ++holeAnchors;
                holeDense += r.flags.denseEnough;
            } else {
                ++latticeAnchors;
                identified += r.flags.identified;
            }
        }
    }
    double fraction = latticeAnchors ? static_cast<double>(identified) / static_cast<double>(latticeAnchors) : 0;
    holesOk = holeDense == 0;
    bool ok = densityOk && fittedC <= 10 && latticeAnchors > 0 && fraction >= 0.9 && holesOk;
    return {ok, Detail() << "fitted c=" << fmt("%.3f", fittedC) << ", E8/PsiE8 anchors identified " << identified << "/"
                         << latticeAnchors << ", hole anchors denseEnough " << holeDense << "/" << holeAnchors};
}

Outcome bin_packing() {
    const double r = 16;
    Window ball = Window::ball(RealVector::Zero(8), r);
    DenseBinPacking bin = dense_bin_packing(ball, 8, 1, 0);
    const double volume = std::pow(kPi, 4) / 24 * std::pow(r, 8);
    const double ceiling = std::pow(kPi, 4) / 24 * std::pow(r + std::sqrt(2.0), 8);
    double count = static_cast<double>(bin.count);
    bool ok = count >= (1 - 8 / r) * volume && count <= ceiling && std::abs(bin.containerVolume - volume) <= 1e-9 * volume;
    return {ok, Detail() << "count=" << bin.count << ", floor=" << fmt("%.6g", (1 - 8 / r) * volume)
                         << ", ceiling=" << fmt("%.6g", ceiling)};
}

Outcome model_checks() {
    bool ok = true;
    double worstRoot = 0;
    for (int k = 1; k <= 20; ++k) worstRoot = std::max(worstRoot, std::abs(model_g8(std::sqrt(2.0 * k))));
    ok = ok && worstRoot <= 1e-12;
    double worstSign = -1e300;
    const int signGrid = 20000;
    for (int i = 0; i <= signGrid; ++i) {
        double t = std::sqrt(2.0) + (10 - std::sqrt(2.0)) * i / signGrid;
        worstSign = std::max(worstSign, model_g8(t));
    }
    ok = ok && worstSign <= 1e-12;
    const double rho0 = load_magic_config(default_config_path()).rho0;
    const double rMax = 10;
    double worstAlpha = 0;
    for (int i = 0; i < 1000; ++i) {
        double t = std::sqrt(2.0) + (rMax - std::sqrt(2.0)) * i / 999;
        double R = std::max(t, 2.0);
        double alpha = rho0 * std::pow(R, 1.5) * std::exp(5 * kPi * R / 4);
        ok = ok && std::abs(alpha8(R, rho0) - alpha) <= 1e-12 * alpha;
        long k = std::max(1L, std::lround(t * t / 2));
        double gap = std::abs(t * t - 2.0 * static_cast<double>(k));
        double rhs = alpha * std::sqrt(std::abs(model_g8(t)));
        if (gap > 0) worstAlpha = std::max(worstAlpha, gap / rhs);
    }
    ok = ok && worstAlpha <= 1;
    double ce = cohn_elkies_functional(RadialModel::g8(), e8_short_basis(), {RealVector::Zero(8)});
    ok = ok && std::abs(ce - 1) <= 1e-9;
    return {ok, Detail() << "root residual=" << fmt("%.2g", worstRoot) << ", max g8 on [sqrt2,10]="
                         << fmt("%.2g", worstSign) << ", max gap/bound=" << fmt("%.3g", worstAlpha)
                         << " (rho0=" << fmt("%g", rho0) << "), functional-1=" << fmt("%.2g", ce - 1)};
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"reference invariants", reference_invariants},
        {"LLL norm-product bound", lll_bounds},
        {"dual basis bounds", dual_basis_bounds},
        {"determinant perturbation bound", determinant_bound},
        {"quantitative Gram snap", snap_bounds},
        {"lattice identification pipeline", pipeline_identification},
        {"periodic patch ground truth", periodic_ground_truth},
        {"block example reproduction", example_reproduction},
        {"dense bin packing counts", bin_packing},
        {"model function checks", model_checks},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("%s %zu %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
