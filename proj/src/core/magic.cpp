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

#include "packstab/magic.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "packstab/error.hpp"

namespace packstab {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

MagicConfig default_magic_config() {
    MagicConfig c;
    c.rho0 = std::ldexp(1.0, -5);
    c.rho1 = std::ldexp(1.0, -100);
    return c;
}

std::string default_config_path() {
#ifdef PACKSTAB_DEFAULT_CONFIG
    return PACKSTAB_DEFAULT_CONFIG;
#else
    return "data/packstab.conf";
#endif
}

static double parse_number(const std::string &value, std::size_t line) {
    // accepts decimal literals and powers of two written as 2^k
    std::size_t caret = value.find('^');
    try {
        if (caret != std::string::npos) {
            double base = std::stod(value.substr(0, caret));
            double exponent = std::stod(value.substr(caret + 1));
            return std::pow(base, exponent);
        }
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw ParseError(line, "malformed number '" + value + "'");
    }
}

MagicConfig parse_magic_config(const std::string &text, MagicConfig c) {
    std::istringstream in(text);
    std::string raw;
    std::size_t lineNo = 0;
    while (std::getline(in, raw)) {
        ++lineNo;
        std::string line = raw.substr(0, raw.find('#'));
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(lineNo, "expected 'key = value'");
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        double v = parse_number(value, lineNo);
        if (key == "rho0") c.rho0 = v;
        else if (key == "rho1") c.rho1 = v;
        else if (key == "eps_gate_8") c.epsGate8 = v;
        else if (key == "eps_gate_24") c.epsGate24 = v;
        else if (key == "norm_tol_cap") c.normTolCap = v;
        else if (key == "patch_snap_tol") c.patchSnapTol = v;
        else if (key == "min_density_fraction") c.minDensityFraction = v;
        else if (key == "search_radius") c.searchRadius = v;
        else if (key == "window_radius") c.windowRadius = v;
        else if (key == "grid_spacing_factor") c.gridSpacingFactor = v;
        else if (key == "saturation_seed_budget") c.saturationSeedBudget = static_cast<long>(v);
        else if (key == "anchor_count") c.anchorCount = static_cast<long>(v);
        else if (key == "seed") c.seed = static_cast<long>(v);
        else if (key == "isometry_budget_24") c.isometryBudget24 = static_cast<long>(v);
        else if (key == "frame_probe_norm_24") c.frameProbeNorm24 = v;
        else if (key == "frame_tol_24") c.frameTol24 = v;
        else if (key == "frame_min_norm_24") c.frameMinNorm24 = v;
        else if (key == "frame_max_norm_24") c.frameMaxNorm24 = v;
        else if (key == "frame_det_low_log2_24") c.frameDetLowLog2_24 = v;
        else if (key == "frame_product_log2_24") c.frameProductLog2_24 = v;
        else throw ParseError(lineNo, "unknown key '" + key + "'");
    }
    require(c.rho0 > 0 && c.rho1 > 0, "config: rho0 and rho1 must be positive");
    require(c.normTolCap > 0 && c.normTolCap < 0.25, "config: norm_tol_cap must lie in (0, 1/4)");
    require(c.patchSnapTol > 0 && c.patchSnapTol <= 0.0625 + 1e-15, "config: patch_snap_tol must lie in (0, 1/16]");
    return c;
}

MagicConfig load_magic_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(Status::Io, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_magic_config(ss.str());
}

double tolerance_radius(double eps) {
    require(eps > 0 && eps < std::exp(-std::exp(1.0)), "tolerance_radius: eps must lie in (0, e^{-e})");
    double l = std::abs(std::log(eps));
    return l / std::log(l);
}

double alpha8(double r, double rho0) {
    require(r >= 1 && rho0 > 0, "alpha8: requires r >= 1 and rho0 > 0");
    return rho0 * std::pow(r, 1.5) * std::exp(1.25 * kPi * r);
}

double alpha24(double r, double rho1) {
    require(r >= 1 && rho1 > 0, "alpha24: requires r >= 1 and rho1 > 0");
    return rho1 * std::pow(r, 5.5) * std::exp(2.5 * std::sqrt(2.0) * kPi * r);
}

double log2_alpha8(double r, double rho0) {
    require(r >= 1 && rho0 > 0, "log2_alpha8: requires r >= 1 and rho0 > 0");
    return std::log2(rho0) + 1.5 * std::log2(r) + 1.25 * kPi * r / std::log(2.0);
}

double log2_alpha24(double r, double rho1) {
    require(r >= 1 && rho1 > 0, "log2_alpha24: requires r >= 1 and rho1 > 0");
    return std::log2(rho1) + 5.5 * std::log2(r) + 2.5 * std::sqrt(2.0) * kPi * r / std::log(2.0);
}

ToleranceParams make_tolerance_params(double eps, int dim, const MagicConfig &cfg) {
    require(dim == 8 || dim == 24, "make_tolerance_params: dimension must be 8 or 24");
    ToleranceParams p;
    p.dim = dim;
    p.eps = eps;
    p.R = tolerance_radius(eps);
    p.rho0 = cfg.rho0;
    p.rho1 = cfg.rho1;
    // full scale: alpha_8(2^20 R) in dimension 8, alpha_24(2^140 R) in dimension 24
    p.alphaLog2 = dim == 8 ? log2_alpha8(std::ldexp(p.R, 20), cfg.rho0) : log2_alpha24(std::ldexp(p.R, 140), cfg.rho1);
    p.normTolLog2 = p.alphaLog2 + 0.25 * std::log2(eps);
    p.normTol = std::min(std::exp2(p.normTolLog2), cfg.normTolCap);
    p.epsGate = dim == 8 ? cfg.epsGate8 : cfg.epsGate24;
    p.patchSnapTol = cfg.patchSnapTol;
    p.minDensityFraction = cfg.minDensityFraction;
    p.searchRadius = cfg.searchRadius;
    p.isometryBudget24 = cfg.isometryBudget24;
    return p;
}

std::optional<long> snap_norm_to_even(double tSq, double delta, ShellMode mode) {
    require(tSq > 0, "snap_norm_to_even: tSq must be positive");
    require(delta > 0, "snap_norm_to_even: delta must be positive");
    require(delta < 1, "snap_norm_to_even: delta >= 1 admits two candidates");
    long k = static_cast<long>(std::nearbyint(tSq / 2));
    long kmin = mode == ShellMode::Dim8 ? 1 : 2;
    if (k < kmin) return std::nullopt;
    if (std::abs(tSq - 2.0 * static_cast<double>(k)) > delta) return std::nullopt;
    return k;
}

double sin2_half_pi_square(double r) {
    double sq = r * r;
    double d = sq - 2 * std::nearbyint(sq / 2);
    double s = std::sin(kPi * d / 2);
    return s * s;
}

namespace {

// integral of t^p exp(-a/t - b t) over (0, inf), split at the peak of the integrand
double laplace_integral(int p, double a, double b) {
    auto f = [=](double t) {
        if (t <= 0 || !std::isfinite(t)) return 0.0;
        return std::exp(p * std::log(t) - a / t - b * t);
    };
    double peak = (std::sqrt(p * p + 4 * a * b) + p) / (2 * b);
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    double tol = 1e-13;
    double left = ts.integrate(f, 0.0, peak, tol);
    double right = es.integrate(f, peak, std::numeric_limits<double>::infinity(), tol);
    return left + right;
}

}  // namespace

double model_g8_integral(double r) {
    require(r > 0, "model_g8_integral: r must be positive");
    return -(368640.0 / (kPi * kPi)) * laplace_integral(2, kPi, kPi * r * r);
}

double model_c3() { return kPi / 28304640.0 * (3657830400.0 / 2.0) * std::exp(100.0); }

double model_g24_integral(double r) {
    require(r > 0, "model_g24_integral: r must be positive");
    return -model_c3() * laplace_integral(10, 2 * kPi, kPi * r * r);
}

double model_g8(double r) {
    require(r * r >= 2 * (1 - 1e-15), "model_g8: r must be at least sqrt(2)");
    double s2 = sin2_half_pi_square(r);
    if (s2 == 0) return 0.0;
    return kPi / 2160.0 * s2 * model_g8_integral(r);
}

double model_g24(double r) {
    require(r * r >= 4 * (1 - 1e-15), "model_g24: r must be at least 2");
    double s2 = sin2_half_pi_square(r);
    if (s2 == 0) return 0.0;
    return s2 * model_g24_integral(r);
}

RadialModel RadialModel::g8() {
    RadialModel m;
    m.dim = 8;
    m.evaluator = [](double r) { return model_g8(r); };
    m.domainFloor = std::sqrt(2.0);
    return m;
}

RadialModel RadialModel::g24() {
    RadialModel m;
    m.dim = 24;
    m.evaluator = [](double r) { return model_g24(r); };
    m.domainFloor = 2.0;
    return m;
}

double RadialModel::decay_radius() const {
    auto envelope = [this](double r) {
        return dim == 8 ? kPi / 2160.0 * std::abs(model_g8_integral(r)) : std::abs(model_g24_integral(r));
    };
    double r = domainFloor;
    while (envelope(r) >= 1e-14 && r < 64) r += 0.05;
    return r;
}

double cohn_elkies_functional(const RadialModel &f, const Lattice &lat, const std::vector<RealVector> &cosets,
                              double truncationRadius) {
    require(!cosets.empty(), "cohn_elkies_functional: need at least one coset");
    const std::size_t n = lat.dim();
    double lambda = shortest_vector(lat).length;
    double minimum = 4 * lambda;
    if (truncationRadius <= 0) truncationRadius = std::max(minimum, f.decay_radius());
    require(truncationRadius >= minimum * (1 - 1e-12), "cohn_elkies_functional: truncation radius below 4 lambda");
    LllResult red = lll_reduce_with_transform(lat);
    BallEnumerator en(red.lattice.basis());
    std::unordered_map<double, double> cache;
    auto eval = [&](double distSq) {
        auto it = cache.find(distSq);
        if (it != cache.end()) return it->second;
        double v = f(std::sqrt(distSq));
        cache.emplace(distSq, v);
        return v;
    };
    const double T2 = truncationRadius * truncationRadius;
    double total = static_cast<double>(cosets.size());
    const RealMatrix &b = red.lattice.basis();
    for (const RealVector &v : cosets) {
        for (const RealVector &w : cosets) {
            RealVector diff = v - w;
            RealVector t = -en.coordinates(diff);
            double sum = 0;
            en.visit(t.data(), T2, [&](const long *x, double) {
                RealVector p = diff;
                for (std::size_t i = 0; i < n; ++i)
                    if (x[i]) p += static_cast<double>(x[i]) * b.col(static_cast<Eigen::Index>(i));
                double d2 = p.squaredNorm();
                if (d2 == 0 || d2 > T2) return;
                sum += eval(d2);
            });
            total += sum;
        }
    }
    return total;
}

double calibrate_rho(int dim, double rMax, int gridPoints) {
    require(dim == 8 || dim == 24, "calibrate_rho: dimension must be 8 or 24");
    const double floor = dim == 8 ? std::sqrt(2.0) : 2.0;
    double worst = 0;
    for (int i = 0; i <= gridPoints; ++i) {
        double r = floor + (rMax - floor) * i / gridPoints;
        double sq = r * r;
        long k = static_cast<long>(std::nearbyint(sq / 2));
        if (dim == 24 && k < 2) k = 2;
        double gap = std::abs(sq - 2.0 * static_cast<double>(k));
        if (gap < 1e-9) continue;
        double g = dim == 8 ? model_g8(r) : model_g24(r);
        double R = std::max(r, 2.0);
        double unit = dim == 8 ? alpha8(R, 1.0) : alpha24(R, 1.0);
        double ratio = gap / (unit * std::sqrt(std::abs(g)));
        worst = std::max(worst, ratio);
    }
    return std::exp2(std::ceil(std::log2(worst)));
}

}  // namespace packstab
