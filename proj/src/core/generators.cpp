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

#include "packstab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "packstab/error.hpp"
#include "packstab/reference.hpp"

namespace packstab {

PeriodicConfig generate_perturbed_config(const Lattice &reference, int blockScale, double noise, double deletionFraction,
                                         std::uint64_t seed, PerturbedReport *report) {
    const std::size_t n = reference.dim();
    require(blockScale >= 1, "generate_perturbed_config: block scale must be positive");
    const double lambda = shortest_vector(reference).length;
    require(noise >= 0 && noise < 0.1 * lambda / 2, "generate_perturbed_config: noise too large");
    require(deletionFraction >= 0 && deletionFraction < 0.5, "generate_perturbed_config: deletion fraction out of range");
    double cosetCount = std::pow(static_cast<double>(blockScale), static_cast<double>(n));
    if (cosetCount > double(1 << 20)) fail(Status::Resource, "generate_perturbed_config: too many cosets");
    std::vector<RealVector> base;
    std::vector<long> c(n, 0);
    while (true) {
        RealVector x = RealVector::Zero(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) x += static_cast<double>(c[i]) * reference.vector(i);
        base.push_back(x);
        std::size_t d = 0;
        while (d < n && ++c[d] == blockScale) c[d++] = 0;
        if (d == n) break;
    }
    std::mt19937_64 rng(seed);
    std::size_t remove = static_cast<std::size_t>(std::floor(deletionFraction * static_cast<double>(base.size()) + 0.5));
    std::vector<std::size_t> order(base.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<char> keep(base.size(), 1);
    for (std::size_t i = 0; i < remove; ++i) keep[order[i]] = 0;
    if (report) report->requestedDeletions = remove;
    const double radius = lambda / 2 - noise;
    Lattice period = reference.scaled(blockScale);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t attempt = 1; attempt <= 16; ++attempt) {
        if (report) report->attempts = attempt;
        std::vector<RealVector> cosets;
        for (std::size_t i = 0; i < base.size(); ++i) {
            if (!keep[i]) continue;
            RealVector x = base[i];
            if (noise > 0) {
                RealVector dir(static_cast<Eigen::Index>(n));
                for (Eigen::Index k = 0; k < dir.size(); ++k) dir[k] = gauss(rng);
                x += noise * unit(rng) * dir / dir.norm();
            }
            cosets.push_back(x);
        }
        try {
            return make_periodic_config(period, std::move(cosets), radius);
        } catch (const PackingViolationError &) {
        }
    }
    fail(Status::Generation, "generate_perturbed_config: packing violation after 16 retries");
}

std::string to_string(BlockLabel b) {
    switch (b) {
    case BlockLabel::Hole: return "hole";
    case BlockLabel::E8: return "E8";
    case BlockLabel::PsiE8: return "PsiE8";
    }
    return "unknown";
}

BlockLabel parse_block_label(const std::string &s) {
    if (s == "hole") return BlockLabel::Hole;
    if (s == "E8") return BlockLabel::E8;
    if (s == "PsiE8") return BlockLabel::PsiE8;
    fail(Status::Parse, "unknown block label '" + s + "'");
}

std::vector<BlockLabel> example_labels(int blockScale) {
    const long r = blockScale;
    long total = 1, holes = 1;
    for (int i = 0; i < 8; ++i) total *= r;
    for (int i = 0; i < 7; ++i) holes *= r;
    std::vector<BlockLabel> labels(static_cast<std::size_t>(total));
    for (long idx = 0; idx < total; ++idx) {
        if (idx < holes) {
            labels[static_cast<std::size_t>(idx)] = BlockLabel::Hole;
            continue;
        }
        long sum = 0, rest = idx;
        for (int i = 0; i < 8; ++i) {
            sum += rest % r;
            rest /= r;
        }
        labels[static_cast<std::size_t>(idx)] = sum % 2 == 0 ? BlockLabel::E8 : BlockLabel::PsiE8;
    }
    return labels;
}

std::size_t ExamplePacking::block_index(const RealVector &p) const {
    const double r = blockScale, period = r * r;
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < 8; ++i) {
        double x = p[i] - period * std::floor(p[i] / period);
        long b = std::clamp(static_cast<long>(std::floor(x / r)), 0L, static_cast<long>(blockScale) - 1);
        idx = idx * static_cast<std::size_t>(blockScale) + static_cast<std::size_t>(b);
    }
    return idx;
}

namespace {

std::vector<RealVector> block_template(const RealMatrix &basis, int blockScale) {
    const double margin = std::sqrt(2.0) / 2;
    const double half = blockScale / 2.0 - margin;
    if (half <= 0) return {};
    RealVector center = RealVector::Constant(8, blockScale / 2.0);
    Window inner = Window::cube(center, half);
    LatticeRegion region(Lattice(basis), RealVector::Zero(8), inner);
    std::vector<RealVector> pts = region.collect(inner);
    std::sort(pts.begin(), pts.end(), [](const RealVector &a, const RealVector &b) {
        return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
    });
    return pts;
}

}  // namespace

ExamplePacking generate_example_packing(int blockScale, std::uint64_t seed) {
    require(blockScale >= 2, "generate_example_packing: block scale must be at least 2");
    if (blockScale > 6) fail(Status::Resource, "generate_example_packing: block scale above the desk-scale memory guard");
    ExamplePacking ex;
    ex.blockScale = blockScale;
    ex.psi = random_disjoint_rotation(8, seed);
    ex.labels = example_labels(blockScale);
    RealMatrix e8 = e8_short_basis().basis();
    std::vector<RealVector> tplE8 = block_template(e8, blockScale);
    std::vector<RealVector> tplPsi = block_template(ex.psi * e8, blockScale);
    ex.templateE8 = tplE8.size();
    ex.templatePsi = tplPsi.size();
    std::size_t perBlock = 1;
    for (int i = 0; i < 7; ++i) perBlock *= static_cast<std::size_t>(blockScale);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<RealVector> cosets;
    for (std::size_t idx = 0; idx < ex.labels.size(); ++idx) {
        BlockLabel label = ex.labels[idx];
        if (label == BlockLabel::Hole) continue;
        const std::vector<RealVector> &tpl = label == BlockLabel::E8 ? tplE8 : tplPsi;
        RealVector offset(8);
        std::size_t rest = idx;
        for (Eigen::Index i = 7; i >= 0; --i) {
            offset[i] = static_cast<double>(blockScale) * static_cast<double>(rest % static_cast<std::size_t>(blockScale));
            rest /= static_cast<std::size_t>(blockScale);
        }
        std::vector<std::size_t> order(tpl.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        std::size_t drop = std::min(perBlock, tpl.size());
        ex.requestedDeletions += perBlock;
        ex.actualDeletions += drop;
        std::vector<std::size_t> kept(order.begin() + static_cast<std::ptrdiff_t>(drop), order.end());
        std::sort(kept.begin(), kept.end());
        for (std::size_t k : kept) cosets.push_back(tpl[k] + offset);
    }
    Lattice period(RealMatrix::Identity(8, 8) * static_cast<double>(blockScale * blockScale));
    ex.config = make_periodic_config(period, std::move(cosets), std::sqrt(2.0) / 2);
    return ex;
}

}  // namespace packstab
