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

#include <cmath>
#include <limits>
#include <unordered_map>

#include "packstab/error.hpp"
#include "packstab/periodic.hpp"

namespace packstab {

namespace {

class Saturator {
public:
    Saturator(PeriodicConfig cfg, const SaturationOptions &opt)
        : cfg_(std::move(cfg)), opt_(opt), en_(cfg_.period.basis()), need_(2 * cfg_.radius),
          n_(cfg_.period.dim()) {
        for (std::size_t i = 0; i < cfg_.cosets.size(); ++i) index(i);
    }

    PeriodicConfig run(SaturationReport &rep) {
        grid_shape(rep);
        for (std::size_t pass = 0; pass < 16; ++pass) {
            ++rep.passes;
            std::size_t before = rep.inserted;
            translation_pass(rep);
            grid_pass(rep);
            if (rep.inserted == before) break;
        }
        return cfg_;
    }

private:
    using Key = std::uint64_t;
    static constexpr std::size_t kMaxSteps = 4096;

    Key cell_key(const RealVector &p) const {
        RealVector u = en_.coordinates(p);
        Key h = 1469598103934665603ull;
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            double f = u[i] - std::floor(u[i]);
            long c = static_cast<long>(std::floor(f * 32)) & 31;
            h = (h ^ static_cast<Key>(c)) * 1099511628211ull;
        }
        return h;
    }

    void index(std::size_t i) { cells_[cell_key(cfg_.cosets[i])].push_back(i); }

    double periodic_distance(const RealVector &p, const RealVector &s) const {
        RealVector u = en_.coordinates(p - s);
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] -= std::nearbyint(u[i]);
        return (cfg_.period.basis() * u).norm();
    }

    // True when some center lies closer than the insertion threshold; blockDist_ holds its distance.
    bool blocked(const RealVector &p) {
        auto it = cells_.find(cell_key(p));
        if (it != cells_.end())
            for (std::size_t i : it->second) {
                double d = periodic_distance(p, cfg_.cosets[i]);
                if (d < need_ - 1e-9) {
                    blockDist_ = d;
                    return true;
                }
            }
        if (lastBlocker_ < cfg_.cosets.size() && close_to(p, lastBlocker_)) return true;
        for (std::size_t i = 0; i < cfg_.cosets.size(); ++i) {
            if (close_to(p, i)) {
                lastBlocker_ = i;
                return true;
            }
        }
        return false;
    }

    bool close_to(const RealVector &p, std::size_t i) {
        RealVector t = en_.coordinates(p - cfg_.cosets[i]);
        bool hit = false;
        const double lim = (need_ - 1e-9) * (need_ - 1e-9);
        en_.visit(t.data(), lim, [&](const long *, double d2) {
            if (d2 < lim && (!hit || d2 < blockDist_ * blockDist_)) {
                hit = true;
                blockDist_ = std::sqrt(d2);
            }
        });
        return hit;
    }

    // Distance to the nearest center and the centers within tie of it, searched up to reach.
    double nearest(const RealVector &p, double reach, std::vector<RealVector> &near) const {
        const RealMatrix &b = cfg_.period.basis();
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, RealVector>> found;
        for (const RealVector &s : cfg_.cosets) {
            RealVector t = en_.coordinates(p - s);
            en_.visit(t.data(), reach * reach, [&](const long *x, double) {
                RealVector q = s;
                for (std::size_t k = 0; k < n_; ++k)
                    if (x[k]) q += static_cast<double>(x[k]) * b.col(static_cast<Eigen::Index>(k));
                double d = (q - p).norm();
                best = std::min(best, d);
                found.emplace_back(d, q);
            });
        }
        near.clear();
        for (auto &[d, q] : found)
            if (d <= best + 1e-3) near.push_back(q);
        return best;
    }

    void insert(const RealVector &p, SaturationReport &rep) {
        if (static_cast<long>(rep.inserted) >= opt_.maxInsertions)
            fail(Status::Resource, "saturate: insertion budget exhausted");
        cfg_.cosets.push_back(reduce_to_fundamental(cfg_.period, p));
        index(cfg_.cosets.size() - 1);
        ++rep.inserted;
    }

    // Difference vectors q - s to the neighbours of center i.
    std::vector<RealVector> neighbour_steps(std::size_t i) const {
        const RealMatrix &b = cfg_.period.basis();
        const RealVector s = cfg_.cosets[i];
        std::vector<RealVector> out;
        for (std::size_t j = 0; j < cfg_.cosets.size(); ++j) {
            const RealVector q0 = cfg_.cosets[j];
            RealVector t = en_.coordinates(s - q0);
            en_.visit(t.data(), 1.0201 * need_ * need_, [&](const long *x, double) {
                RealVector d = q0 - s;
                for (std::size_t k = 0; k < n_; ++k)
                    if (x[k]) d += static_cast<double>(x[k]) * b.col(static_cast<Eigen::Index>(k));
                if (d.norm() > 0) out.push_back(d);
            });
        }
        return out;
    }

    // Probes s - d (reflection of each neighbour through s) and s + d for steps shared by many centers.
    void translation_pass(SaturationReport &rep) {
        const std::size_t m = cfg_.cosets.size();
        std::vector<std::vector<RealVector>> local(m);
        std::vector<RealVector> steps;
        std::vector<std::size_t> counts;
        const double tol = 1e-3 * need_;
        for (std::size_t i = 0; i < m; ++i) {
            local[i] = neighbour_steps(i);
            for (const RealVector &d : local[i]) {
                std::size_t k = 0;
                while (k < steps.size() && (steps[k] - d).cwiseAbs().maxCoeff() >= tol) ++k;
                if (k == steps.size()) {
                    if (steps.size() >= kMaxSteps) continue;
                    steps.push_back(d);
                    counts.push_back(0);
                }
                ++counts[k];
            }
        }
        std::vector<RealVector> shared;
        const std::size_t floor = std::max<std::size_t>(2, m / 4);
        for (std::size_t k = 0; k < steps.size(); ++k)
            if (counts[k] >= floor) shared.push_back(steps[k]);
        for (std::size_t i = 0; i < m; ++i) {
            const RealVector s = cfg_.cosets[i];
            auto probe = [&](const RealVector &p) {
                ++rep.probes;
                if (!blocked(p)) insert(p, rep);
            };
            for (const RealVector &d : local[i]) probe(s - d);
            for (const RealVector &d : shared) probe(s + d);
        }
    }

    void grid_shape(SaturationReport &rep) {
        const double h = opt_.spacingFactor * cfg_.radius;
        steps_.assign(n_, 1);
        std::vector<double> len(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            len[i] = cfg_.period.vector(i).norm();
            steps_[i] = std::max<long>(1, static_cast<long>(std::ceil(len[i] / h)));
        }
        auto total = [&] {
            double t = 1;
            for (long s : steps_) t *= static_cast<double>(s);
            return t;
        };
        while (total() > static_cast<double>(opt_.gridBudget)) {
            std::size_t worst = 0;
            for (std::size_t i = 1; i < n_; ++i)
                if (steps_[i] > steps_[worst]) worst = i;
            if (steps_[worst] == 1) break;
            --steps_[worst];
        }
        double spacing = 0;
        for (std::size_t i = 0; i < n_; ++i) spacing = std::max(spacing, len[i] / static_cast<double>(steps_[i]));
        rep.effectiveSpacing = spacing;
        rep.slack = spacing * std::sqrt(static_cast<double>(n_)) / 2;
    }

    void grid_pass(SaturationReport &rep) {
        std::vector<long> k(n_, 0);
        RealVector u(n_);
        std::vector<RealVector> near;
        while (true) {
            for (std::size_t i = 0; i < n_; ++i)
                u[static_cast<Eigen::Index>(i)] = (static_cast<double>(k[i]) + 0.5) / static_cast<double>(steps_[i]);
            RealVector p = cfg_.period.basis() * u;
            ++rep.gridPoints;
            if (!blocked(p)) {
                insert(p, rep);
            } else if (blockDist_ >= 0.75 * need_) {
                ascend(p, near, rep);
            }
            std::size_t d = 0;
            while (d < n_ && ++k[d] == steps_[d]) k[d++] = 0;
            if (d == n_) break;
        }
    }

    // Local maximin ascent from a blocked grid point lying in a sizeable gap.
    void ascend(RealVector p, std::vector<RealVector> &near, SaturationReport &rep) {
        double d = nearest(p, need_, near);
        if (d < 0.75 * need_) return;
        double step = need_ - d;
        for (int it = 0; it < 32 && step > 1e-6; ++it) {
            RealVector dir = RealVector::Zero(static_cast<Eigen::Index>(n_));
            for (const RealVector &q : near) {
                RealVector v = p - q;
                double len = v.norm();
                if (len > 0) dir += v / len;
            }
            double len = dir.norm();
            if (len < 1e-12) return;
            RealVector cand = p + step * dir / len;
            std::vector<RealVector> candNear;
            double cd = nearest(cand, need_ + step, candNear);
            if (cd > d) {
                p = cand;
                d = cd;
                near.swap(candNear);
                if (d >= need_ - 1e-9) {
                    if (!blocked(p)) insert(p, rep);
                    return;
                }
            } else {
                step /= 2;
            }
        }
    }

    PeriodicConfig cfg_;
    SaturationOptions opt_;
    BallEnumerator en_;
    double need_;
    std::size_t n_;
    std::vector<long> steps_;
    std::unordered_map<Key, std::vector<std::size_t>> cells_;
    std::size_t lastBlocker_ = std::numeric_limits<std::size_t>::max();
    double blockDist_ = 0;
};

}  // namespace

PeriodicConfig saturate(const PeriodicConfig &cfg, const SaturationOptions &opt, SaturationReport *report) {
    require(opt.spacingFactor > 0 && opt.gridBudget > 0, "saturate: invalid options");
    SaturationReport local;
    Saturator s(cfg, opt);
    PeriodicConfig out = s.run(report ? *report : local);
    verify_packing(out);
    return out;
}

}  // namespace packstab
