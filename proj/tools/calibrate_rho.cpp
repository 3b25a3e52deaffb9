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
#include <cstdio>

#include "packstab/magic.hpp"

int main() {
    double rho0 = packstab::calibrate_rho(8);
    double rho1 = packstab::calibrate_rho(24);
    std::printf("rho0 = 2^%g\nrho1 = 2^%g\n", std::log2(rho0), std::log2(rho1));
    return 0;
}
