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
#include <optional>
#include <string>
#include <vector>

#include "packstab/int_gram.hpp"
#include "packstab/lattice.hpp"

namespace packstab {

// Columns 2e1, e2-e1, ..., e7-e6 and the all-halves vector.
Lattice e8_short_basis();
IntGram e8_gram();

// 12 x 24 generator matrix of the extended binary Golay code.
IntMatrix golay_generator();
// Rows form a basis of sqrt(8) times the Leech lattice inside Z^24.
IntMatrix leech_integer_basis();
Lattice leech_basis();
IntGram leech_gram();
// Basis made of minimal (norm 4) vectors; coefficients with respect to leech_basis().
const IntMatrix &leech_minimal_basis_coefficients();
Lattice leech_short_basis();
IntGram leech_short_gram();

bool is_even_unimodular(const IntGram &g);

enum class Verdict { E8, Leech, OtherEvenUnimodular, NotEvenUnimodular };
std::string to_string(Verdict v);

struct LatticeIdentity {
    Verdict verdict = Verdict::NotEvenUnimodular;
    std::optional<std::vector<long>> witness;  // a short vector when one decides the verdict
    std::string evidence;
};

LatticeIdentity identify_even_unimodular(const IntGram &g, std::uint64_t budget = kDefaultNodeBudget);

enum class IsometryOutcome { Found, None, Undecided };
std::string to_string(IsometryOutcome o);

struct IsometryResult {
    IsometryOutcome outcome = IsometryOutcome::None;
    std::optional<IntMatrix> transform;  // T^t g1 T = g2
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kIsometryBudgetSmallDim = 1ull << 40;
inline constexpr std::uint64_t kIsometryBudgetDim24 = 4096;
// Above dimension 8 an undecided search is retried with seeded candidate orders.
inline constexpr std::uint64_t kIsometryRestarts = 16;

// Searches a unimodular T with T^t g1 T = g2. Dimensions up to 8 always decide;
// larger dimensions stop at the budget with an undecided outcome.
IsometryResult gram_isometry(const IntGram &g1, const IntGram &g2, std::uint64_t budget = 0);

// Seeded orthogonal matrix sharing no nonzero vector of norm^2 <= 8 between E8 and its image.
RealMatrix random_disjoint_rotation(int dim, std::uint64_t seed);
bool shares_short_vector(const RealMatrix &psi, double maxNormSq = 8.0, double tol = 1e-6);

// A basis of Z^n made of the given coefficient vectors (as columns), picked greedily in
// order; empty when the greedy choice does not complete.
std::optional<IntMatrix> unimodular_basis_from_vectors(const std::vector<std::vector<long>> &vectors, std::size_t n);

}  // namespace packstab
