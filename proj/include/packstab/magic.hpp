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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "packstab/lattice.hpp"

namespace packstab {

// Tunable constants; defaults match the shipped data/packstab.conf.
struct MagicConfig {
    double rho0 = 0;
    double rho1 = 0;
    double epsGate8 = 1e-3;
    double epsGate24 = 1e-3;
    double normTolCap = 0.1;
    double patchSnapTol = 0.0625;
    double minDensityFraction = 0.5;
    double searchRadius = 4.0;
    double windowRadius = 6.0;
    double gridSpacingFactor = 0.25;
    long saturationSeedBudget = 16384;
    long anchorCount = 20;
    long seed = 1;
    long isometryBudget24 = 4096;
    // dimension-24 frame constants
    double frameProbeNorm24 = 4.0;
    double frameTol24 = 2.0;
    double frameMinNorm24 = 2.0;
    double frameMaxNorm24 = 6.0;
    double frameDetLowLog2_24 = 24.0;
    double frameProductLog2_24 = 38.04;  // log2(3^24)
};

MagicConfig default_magic_config();
// Parses "key = value" lines; unknown keys are a parse error.
MagicConfig load_magic_config(const std::string &path);
MagicConfig parse_magic_config(const std::string &text, MagicConfig base = default_magic_config());
std::string default_config_path();

struct ToleranceParams {
    int dim = 8;
    double eps = 1e-3;
    double R = 0;            // |log eps| / log|log eps|
    double alphaLog2 = 0;    // log2 of the bound value alpha(scale * R)
    double normTolLog2 = 0;  // log2 of alpha * eps^{1/4}
    double normTol = 0;      // effective squared-norm tolerance used by the pipelines
    double rho0 = 0, rho1 = 0;
    double epsGate = 1e-3;
    double patchSnapTol = 0.0625;
    double minDensityFraction = 0.5;
    double searchRadius = 4.0;
    long isometryBudget24 = 4096;
};

ToleranceParams make_tolerance_params(double eps, int dim, const MagicConfig &cfg = default_magic_config());

double tolerance_radius(double eps);
double alpha8(double r, double rho0);
double alpha24(double r, double rho1);
double log2_alpha8(double r, double rho0);
double log2_alpha24(double r, double rho1);

enum class ShellMode { Dim8, Dim24 };
std::optional<long> snap_norm_to_even(double tSq, double delta, ShellMode mode = ShellMode::Dim8);

// sin^2(pi r^2 / 2) evaluated through the reduced argument for accuracy near the roots.
double sin2_half_pi_square(double r);
// Integral parts of the leading-order models (quadrature).
double model_g8_integral(double r);
double model_g24_integral(double r);
double model_c3();
double model_g8(double r);
double model_g24(double r);

struct RadialModel {
    int dim = 8;
    std::function<double(double)> evaluator;
    double domainFloor = 0;  // evaluator is only called for r >= domainFloor
    double capValue = 1.0;   // contribution of pairs closer than domainFloor
    double operator()(double r) const { return r < domainFloor ? capValue : evaluator(r); }
    static RadialModel g8();
    static RadialModel g24();
    // Radius beyond which the model envelope stays below 1e-14.
    double decay_radius() const;
};

double cohn_elkies_functional(const RadialModel &f, const Lattice &lat, const std::vector<RealVector> &cosets,
                              double truncationRadius = 0);

// Smallest power of two rho with |r^2 - 2k| <= alpha(max(r, 2), rho) sqrt|g(r)| over a grid on [floor, rMax].
double calibrate_rho(int dim, double rMax = 16.0, int gridPoints = 20000);

}  // namespace packstab
