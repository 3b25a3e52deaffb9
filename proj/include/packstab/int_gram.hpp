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

#include "packstab/linalg.hpp"

namespace packstab {

// Symmetric positive definite integer Gram matrix.
class IntGram {
public:
    IntGram() = default;
    // Throws NotPositiveDefiniteError (carrying the failing leading minor) or a contract error.
    explicit IntGram(IntMatrix m);
    static std::optional<IntGram> try_make(IntMatrix m);

    std::size_t n() const noexcept { return m_.rows(); }
    const IntMatrix &matrix() const noexcept { return m_; }
    const mpz_class &operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    bool is_even() const;
    mpz_class det() const;
    RealMatrix to_real() const;
    // T^t G T
    IntGram transformed(const IntMatrix &t) const;
    bool operator==(const IntGram &o) const { return m_ == o.m_; }

private:
    IntMatrix m_;
};

std::vector<mpz_class> leading_minors(const IntMatrix &m);
IntGram direct_sum(const IntGram &a, const IntGram &b);

}  // namespace packstab
