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

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "packstab/periodic.hpp"
#include "packstab/reference.hpp"

namespace packstab {

struct AnchorOptions {
    double probeNorm = 2 * std::sqrt(2.0);
    double probeTol = std::sqrt(2.0);
    double minNorm = std::sqrt(2.0);
    double maxNorm = 4 * std::sqrt(2.0);
    double detLowLog2 = 4;
    double detHighLog2 = 20;
    double productLog2 = 16;
    double patchDetLowLog2 = -20;
    double reducedNormLog2 = 15;
    double patchSnapTol = 0.0625;
    double minDensityFraction = 0.5;
    std::size_t matchedBudget = 1u << 16;

    static AnchorOptions for_dim(int dim, const MagicConfig &cfg = default_magic_config());
};

struct AnchorFrame {
    RealVector center;                // s_a, the center nearest to the anchor
    std::vector<RealVector> vectors;  // v_i, relative to center
    double absDet = 0;
    double productNorms = 0;
    bool normsOk = false, detOk = false, productOk = false;
    bool ok() const { return normsOk && detOk && productOk; }
};

// Throws Status::Internal ("saturation violated") when no center lies near a probe.
AnchorFrame anchor_frame(const PointSource &source, const RealVector &anchor, const Window &window,
                         const AnchorOptions &opt);

struct PatchReconstruction {
    AnchorFrame frame;
    RealMatrix dualBasis;         // u_i, with <u_i, v_j> = delta_ij
    IntMatrix hnfRows;            // rows span the patch coordinates l
    RealMatrix fittedMap;         // least-squares map l -> v
    RealVector fittedOffset;
    Lattice lattice;              // L, fitted basis fittedMap * hnfRows^t
    std::uint64_t points = 0;
    double maxResidual = 0;       // max ||v - sum l_i u_i||
    std::uint64_t residualViolations = 0;
    double detL = 0;
    double maxReducedNorm = 0;
    bool claimA = false, claimB = false, claimC = false;
    RealVector sumV, sumL;        // for the translation fit
};

// Throws Status::Regime ("anchor in bad region") when a point misses L0 by more than the snap tolerance.
PatchReconstruction reconstruct_patch_lattice(const PointSource &source, const RealVector &anchor, const Window &window,
                                              const AnchorOptions &opt);

struct AnchorFlags {
    bool denseEnough = false;
    bool badSetAvoided = false;
    bool identified = false;
    bool all() const { return denseEnough && badSetAvoided && identified; }
};

struct AnchorReport {
    RealVector anchor;
    std::vector<RealVector> frame;
    bool frameOk = false;
    std::optional<Lattice> recoveredLattice;
    LatticeIdentity recoveredIdentity;
    std::optional<RealMatrix> snappedBasis;
    std::vector<RealVector> matchedZ;
    bool matchedStored = false;
    double hausdorff = std::numeric_limits<double>::infinity();
    bool hausdorffExact = false;
    double gapRatio = std::numeric_limits<double>::infinity();
    std::uint64_t pointCount = 0;
    std::uint64_t latticeCount = 0;
    double windowVolume = 0;
    double densityThreshold = 0;
    bool claimA = false, claimB = false, claimC = false;
    AnchorFlags flags;
    std::string failure;
};

struct AnchorContext {
    const PointSource *source = nullptr;
    const PointSource *badSource = nullptr;  // centers of the bad set, if any
    int dim = 8;
    ToleranceParams params;
    AnchorOptions options;
};

// window is the shape K; it is centered at the anchor.
AnchorReport analyze_anchor(const AnchorContext &ctx, const RealVector &anchor, const Window &window);

struct AnchorSummary {
    std::vector<AnchorReport> reports;
    std::size_t successes = 0;
    double fraction = 0;
    double halfWidth = 1;  // 95% Wilson half-width
    bool lowConfidence = true;
    double medianHausdorff = 0;
    double medianGapRatio = 0;
};

// Uniform seeded anchors in the fundamental parallelepiped of period.
std::vector<RealVector> sample_fundamental(const Lattice &period, std::size_t count, std::uint64_t seed);
// Uniform seeded anchors in a box region.
std::vector<RealVector> sample_box(const Window &region, std::size_t count, std::uint64_t seed);
AnchorSummary analyze_anchors(const AnchorContext &ctx, const std::vector<RealVector> &anchors, const Window &window);
AnchorSummary sample_anchors(const AnchorContext &ctx, const Lattice &period, const Window &window, std::size_t count,
                             std::uint64_t seed);
// Wilson score interval half-width at 95%.
double wilson_half_width(std::size_t successes, std::size_t trials);
// Worker count from PACKSTAB_THREADS, defaulting to the hardware concurrency.
unsigned worker_count();

}  // namespace packstab
