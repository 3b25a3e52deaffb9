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
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "packstab/lattice.hpp"
#include "packstab/magic.hpp"
#include "packstab/window.hpp"

namespace packstab {

struct PeriodicConfig {
    Lattice period;                  // Lambda, stored LLL-reduced
    std::vector<RealVector> cosets;  // S, reduced into the fundamental parallelepiped
    int dim = 8;
    double radius = 0;               // packing radius

    std::size_t size() const { return cosets.size(); }
    double center_density() const { return static_cast<double>(cosets.size()) / period.det(); }
};

// Reduces the cosets, rejects coincident cosets and verifies the packing condition.
PeriodicConfig make_periodic_config(const Lattice &period, std::vector<RealVector> cosets, double radius);
// Throws PackingViolationError naming the first offending coset pair.
void verify_packing(const PeriodicConfig &cfg);
// Smallest distance between distinct points of S + Lambda (infinity for a single point with no translates in reach).
double min_distance(const PeriodicConfig &cfg);
RealVector reduce_to_fundamental(const Lattice &period, const RealVector &p);
// Applies x -> rot x + shift to period and cosets.
PeriodicConfig transform_config(const PeriodicConfig &cfg, const RealMatrix &rot, const RealVector &shift);

using PointVisitor = std::function<void(const RealVector &)>;

class PointSource {
public:
    virtual ~PointSource() = default;
    virtual std::size_t dim() const = 0;
    virtual void for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const = 0;
    virtual void for_each_in_window(const Window &w, const PointVisitor &f) const;
    virtual std::uint64_t count_in_window(const Window &w) const;
    std::optional<RealVector> nearest(const RealVector &c, double maxDist) const;
    std::optional<RealVector> nearest_in_window(const RealVector &c, double maxDist, const Window &w) const;
    std::vector<RealVector> collect(const Window &w) const;
};

// The points of S + Lambda.
class PeriodicSource : public PointSource {
public:
    explicit PeriodicSource(const PeriodicConfig &cfg);
    // Restricted to the listed cosets.
    PeriodicSource(const PeriodicConfig &cfg, std::vector<std::size_t> cosetIndices);
    std::size_t dim() const override { return cfg_.period.dim(); }
    void for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const override;
    std::uint64_t count_in_window(const Window &w) const override;

private:
    PeriodicConfig cfg_;
    std::vector<std::size_t> indices_;
    BallEnumerator enumerator_;
};

class FinitePointSet : public PointSource {
public:
    explicit FinitePointSet(std::vector<RealVector> points);
    std::size_t dim() const override { return dim_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<RealVector> &points() const { return points_; }
    void for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const override;

private:
    std::vector<RealVector> points_;
    std::size_t dim_ = 0;
};

// (lattice - shift) restricted to a window.
class LatticeRegion : public PointSource {
public:
    LatticeRegion(const Lattice &lat, RealVector shift, Window region, bool standardE8 = false);
    std::size_t dim() const override { return lat_.dim(); }
    const Window &region() const { return region_; }
    const RealVector &shift() const { return shift_; }
    const Lattice &lattice() const { return lat_; }
    void for_each_in_ball(const RealVector &c, double r, const PointVisitor &f) const override;
    void for_each_in_window(const Window &w, const PointVisitor &f) const override;
    std::uint64_t count_in_window(const Window &w) const override;
    std::uint64_t count() const { return count_in_window(region_); }

private:
    Lattice lat_;
    RealVector shift_;
    Window region_;
    bool standardE8_;
    BallEnumerator enumerator_;
};

// Points of lattice - shift inside w, all shapes; the exact E8 counter handles balls, boxes and their intersection.
std::uint64_t count_lattice_points(const Lattice &lat, const RealVector &shift, const Window &w);
std::uint64_t count_e8_points(const RealVector &shift, const Window *ball, const Window *box);

struct SaturationReport {
    std::size_t inserted = 0;
    std::size_t gridPoints = 0;
    std::size_t probes = 0;
    double effectiveSpacing = 0;
    double slack = 0;  // covering slack of the grid, spacing * sqrt(n) / 2
    std::size_t passes = 0;
};

struct SaturationOptions {
    double spacingFactor = 0.25;
    long gridBudget = 16384;
    long maxInsertions = 1L << 20;
};

PeriodicConfig saturate(const PeriodicConfig &cfg, const SaturationOptions &opt = {}, SaturationReport *report = nullptr);

// Indices of cosets with a difference vector of length <= searchRadius whose squared norm misses the even shells.
std::vector<std::size_t> bad_set(const PeriodicConfig &cfg, double normTol, double searchRadius);

double hausdorff(const std::vector<RealVector> &a, const std::vector<RealVector> &b);

}  // namespace packstab
