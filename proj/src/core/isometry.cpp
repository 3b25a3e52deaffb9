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
#include <map>
#include <random>

#include "packstab/error.hpp"
#include "packstab/reference.hpp"

namespace packstab {

std::string to_string(IsometryOutcome o) {
    switch (o) {
    case IsometryOutcome::Found: return "found";
    case IsometryOutcome::None: return "none";
    case IsometryOutcome::Undecided: return "undecided";
    }
    return "unknown";
}

namespace {

struct Shell {
    std::size_t n = 0;
    std::vector<std::int32_t> coeffs;  // count x n
    std::vector<std::int64_t> images;  // G1 * x, count x n
    std::size_t count() const { return n ? coeffs.size() / n : 0; }
};

class IsometrySearch {
public:
    IsometrySearch(const IntGram &g1, const IntGram &g2, std::uint64_t budget) : g2_(g2), n_(g1.n()), budget_(budget) {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (!g1(i, j).fits_slong_p() || !g2(i, j).fits_slong_p())
                    fail(Status::Numeric, "gram_isometry: Gram entries too large");
            }
        order_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) order_[i] = i;
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return g2(a, a) < g2(b, b); });
        for (std::size_t i = 0; i < n_; ++i) {
            long norm = g2(i, i).get_si();
            if (shells_.count(norm)) continue;
            ShellListing listing = enumerate_shell(g1, norm);
            Shell s;
            s.n = n_;
            s.coeffs.reserve(listing.count * n_);
            s.images.reserve(listing.count * n_);
            for (const auto &v : listing.vectors) {
                for (std::size_t k = 0; k < n_; ++k) {
                    if (v[k] > INT32_MAX || v[k] < INT32_MIN) fail(Status::Numeric, "gram_isometry: coefficient too large");
                    s.coeffs.push_back(static_cast<std::int32_t>(v[k]));
                }
                for (std::size_t r = 0; r < n_; ++r) {
                    std::int64_t acc = 0;
                    for (std::size_t k = 0; k < n_; ++k) acc += g1(r, k).get_si() * static_cast<std::int64_t>(v[k]);
                    s.images.push_back(acc);
                }
            }
            shells_.emplace(norm, std::move(s));
        }
    }

    IsometryResult run(std::uint64_t shuffleSeed = 0) {
        nodes_ = 0;
        IsometryResult result;
        std::vector<std::vector<std::uint32_t>> domains(n_);
        for (std::size_t level = 0; level < n_; ++level) {
            const Shell &s = shell_for(level);
            domains[level].resize(s.count());
            for (std::size_t k = 0; k < s.count(); ++k) domains[level][k] = static_cast<std::uint32_t>(k);
            if (shuffleSeed) {
                std::mt19937_64 rng(shuffleSeed * 1000003 + level);
                std::shuffle(domains[level].begin(), domains[level].end(), rng);
            }
            if (domains[level].empty()) {
                result.outcome = IsometryOutcome::None;
                return result;
            }
        }
        chosen_.assign(n_, 0);
        assigned_.assign(n_, false);
        bool found = false;
        bool exhausted = false;
        try {
            found = descend(0, domains);
        } catch (const BudgetExhausted &) {
            exhausted = true;
        }
        result.nodes = nodes_;
        if (exhausted) {
            result.outcome = IsometryOutcome::Undecided;
            return result;
        }
        if (!found) {
            result.outcome = IsometryOutcome::None;
            return result;
        }
        IntMatrix t(n_, n_);
        for (std::size_t level = 0; level < n_; ++level) {
            const Shell &s = shell_for(level);
            for (std::size_t k = 0; k < n_; ++k) t(k, order_[level]) = s.coeffs[chosen_[level] * n_ + k];
        }
        result.outcome = IsometryOutcome::Found;
        result.transform = t;
        return result;
    }

private:
    struct BudgetExhausted {};

    const Shell &shell_for(std::size_t level) const { return shells_.at(g2_(order_[level], order_[level]).get_si()); }

    // Branches on the unassigned level with the smallest remaining domain.
    bool descend(std::size_t depth, std::vector<std::vector<std::uint32_t>> &domains) {
        if (depth == n_) return true;
        std::size_t level = n_;
        for (std::size_t l = 0; l < n_; ++l)
            if (!assigned_[l] && (level == n_ || domains[l].size() < domains[level].size())) level = l;
        const Shell &s = shell_for(level);
        assigned_[level] = true;
        std::vector<std::vector<std::uint32_t>> next(n_);
        for (std::uint32_t cand : domains[level]) {
            if (++nodes_ > budget_) throw BudgetExhausted{};
            const std::int64_t *img = &s.images[static_cast<std::size_t>(cand) * n_];
            bool alive = true;
            for (std::size_t later = 0; later < n_ && alive; ++later) {
                if (assigned_[later]) continue;
                const Shell &ls = shell_for(later);
                const std::int64_t target = g2_(order_[level], order_[later]).get_si();
                next[later].clear();
                for (std::uint32_t y : domains[later]) {
                    const std::int32_t *yc = &ls.coeffs[static_cast<std::size_t>(y) * n_];
                    std::int64_t ip = 0;
                    for (std::size_t k = 0; k < n_; ++k) ip += img[k] * yc[k];
                    if (ip == target) next[later].push_back(y);
                }
                alive = !next[later].empty();
            }
            if (!alive) continue;
            chosen_[level] = cand;
            if (descend(depth + 1, next)) return true;
        }
        assigned_[level] = false;
        return false;
    }

    const IntGram &g2_;
    std::size_t n_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::size_t> order_;
    std::map<long, Shell> shells_;
    std::vector<std::uint32_t> chosen_;
    std::vector<bool> assigned_;
};

}  // namespace

IsometryResult gram_isometry(const IntGram &g1, const IntGram &g2, std::uint64_t budget) {
    require(g1.n() == g2.n(), "gram_isometry: dimension mismatch");
    if (budget == 0) budget = g1.n() <= 8 ? kIsometryBudgetSmallDim : kIsometryBudgetDim24;
    IsometryResult none;
    if (g1.det() != g2.det()) return none;
    if (g1.is_even() != g2.is_even() && g1.n() > 0) {
        // parity of the lattice is an invariant; an odd diagonal proves the lattice is odd
        return none;
    }
    IsometrySearch search(g1, g2, budget);
    IsometryResult r = search.run();
    std::uint64_t total = r.nodes;
    for (std::uint64_t attempt = 1; attempt < kIsometryRestarts && r.outcome == IsometryOutcome::Undecided && g1.n() > 8;
         ++attempt) {
        r = search.run(attempt);
        total += r.nodes;
    }
    r.nodes = total;
    if (r.outcome == IsometryOutcome::Found) {
        const IntMatrix &t = *r.transform;
        if (t.transpose() * g1.matrix() * t != g2.matrix())
            fail(Status::Internal, "gram_isometry: witness failed exact verification");
    }
    if (r.outcome == IsometryOutcome::Undecided && g1.n() <= 8)
        fail(Status::Resource, "gram_isometry: budget exhausted in small dimension");
    return r;
}

}  // namespace packstab
