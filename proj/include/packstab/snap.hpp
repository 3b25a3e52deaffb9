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

#include <optional>

#include "packstab/int_gram.hpp"
#include "packstab/linalg.hpp"

namespace packstab {

struct SnapResult {
    RealMatrix snappedBasis;  // columns v_i
    IntGram targetGram;       // K
    double maxDisplacement = 0;  // max_i ||v_i - u_i||
    double certifiedBound = 0;   // gamma_M * eps
    double gramDeviation = 0;    // eps = max |gram(u) - K|
    double normBound = 0;        // M
};

// 2^n m^{n-1} eps
double det_perturbation_bound(double m, double eps, int n);
// Nearest integer matrix with even diagonal; empty when an entry misses by more than tol
// or the result is not positive definite.
std::optional<IntGram> round_gram(const SymRealMatrix &g, double tol);
SnapResult snap_to_integral_gram(const RealMatrix &basis, const IntGram &k);
// sqrt(2) n^{7/2+n} m^2 (m^2+1)^n
double gamma_M(int n, double m);
double log2_gamma_M(int n, double m);

}  // namespace packstab
