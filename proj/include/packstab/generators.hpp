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
#include <string>
#include <vector>

#include "packstab/periodic.hpp"

namespace packstab {

struct PerturbedReport {
    std::size_t requestedDeletions = 0;
    std::size_t attempts = 0;
};

// Lambda = blockScale * reference with blockScale^n cosets, each displaced by at most noise, a fraction deleted.
// The packing radius of the result is lambda/2 - noise.
PeriodicConfig generate_perturbed_config(const Lattice &reference, int blockScale, double noise, double deletionFraction,
                                         std::uint64_t seed, PerturbedReport *report = nullptr);

enum class BlockLabel { Hole, E8, PsiE8 };
std::string to_string(BlockLabel b);
BlockLabel parse_block_label(const std::string &s);

struct ExamplePacking {
    PeriodicConfig config;
    int blockScale = 0;
    RealMatrix psi;
    std::vector<BlockLabel> labels;  // block index i-1 for v_i in lexicographic order
    std::size_t templateE8 = 0, templatePsi = 0;
    std::size_t requestedDeletions = 0, actualDeletions = 0;

    // Block of a point reduced into [0, R^2)^8.
    std::size_t block_index(const RealVector &p) const;
    BlockLabel label_at(const RealVector &p) const { return labels[block_index(p)]; }
};

std::vector<BlockLabel> example_labels(int blockScale);
ExamplePacking generate_example_packing(int blockScale, std::uint64_t seed);

}  // namespace packstab
