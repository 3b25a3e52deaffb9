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

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "packstab/anchor.hpp"

namespace packstab {

struct DenseBinPacking {
    std::shared_ptr<LatticeRegion> points;  // C0 intersected with (reference - shift)
    RealVector shift;
    Window shrunk;                          // C0 = (1 - 1/r(C)) C
    std::uint64_t count = 0;
    double containerVolume = 0;
    double lowerBound = 0;                  // (1 - c/r(C)) V(C)
    double upperBound = 0;                  // V(C + rho B^n)
    std::size_t samples = 0;
    std::vector<RealVector> materialized;   // filled when count fits the budget
};

DenseBinPacking dense_bin_packing(const Window &container, int dim, std::uint64_t seed = 1,
                                  std::uint64_t materializeBudget = 1u << 20);

struct BinTilingOptions {
    double cubeEdge = 0;  // 0: min(1/eps, inradius/4)
    std::size_t maxAnalyzedCubes = 4;
    std::size_t anchorsPerCube = 4;
    double windowRadius = 6;
    std::uint64_t seed = 1;
    int dim = 8;
};

struct CubeVerdict {
    RealVector center;
    std::uint64_t count = 0;
    bool regular = false;
    std::optional<AnchorSummary> analysis;
};

struct BinTilingReport {
    double cubeEdge = 0;
    double threshold = 0;  // (1 - sqrt(eps)) edge^n
    std::vector<CubeVerdict> cubes;
    std::size_t regular = 0;
    double regularFraction = 0;
    std::size_t analyzed = 0;
    std::size_t analyzedSuccesses = 0;
    std::size_t analyzedAnchors = 0;
};

BinTilingReport bin_tiling_analysis(const PointSource &points, const Window &container, double eps,
                                    const ToleranceParams &params, const BinTilingOptions &opt = {});

}  // namespace packstab
