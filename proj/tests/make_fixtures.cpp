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

#include <iostream>
#include <random>
#include <string>

#include "packstab/io.hpp"
#include "packstab/reference.hpp"
#include "support.hpp"

using namespace packstab;

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <directory>\n";
        return 1;
    }
    const std::string dir = argv[1];
    testing::Rng rng(20240611);
    Lattice e8 = e8_short_basis();
    write_lattice(dir + "/e8.lat", e8);
    write_lattice(dir + "/e8_scaled.lat", e8.scaled(1.2));
    IntMatrix skew = testing::random_unimodular(8, rng, 64, 40);
    write_lattice(dir + "/e8_long.lat", e8.with_basis_change(skew));
    write_lattice(dir + "/z8_skew.lat", Lattice(testing::random_unimodular(8, rng, 64, 40).to_real()));
    write_lattice(dir + "/e8_noisy.lat", testing::noisy_copy(e8, 1e-7, rng));
    write_file(dir + "/bad_row.lat", "dim 3\n1 0 0\n0 1\n0 0 1\n");
    return 0;
}
