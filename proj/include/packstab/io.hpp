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

#include <gmpxx.h>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "packstab/generators.hpp"
#include "packstab/periodic.hpp"

namespace packstab {

// Shortest decimal text that reads back to the same double (17 significant digits).
std::string format_double(double x);
// Parses a decimal or "p/q" entry exactly.
mpq_class parse_rational(const std::string &token, std::size_t line);
// Nearest double, ties to even.
double rational_to_double(const mpq_class &q);

struct LatticeFile {
    Lattice lattice;                 // columns are the rows of the file
    std::vector<mpq_class> exact;    // row-major entries as written
};

LatticeFile parse_lattice(const std::string &text);
LatticeFile read_lattice(const std::string &path);
std::string format_lattice(const Lattice &lat);
void write_lattice(const std::string &path, const Lattice &lat);

struct ConfigFile {
    PeriodicConfig config;
    int blockScale = 0;               // example packings only
    std::vector<BlockLabel> labels;   // example packings only
};

ConfigFile parse_config(const std::string &text);
ConfigFile read_config(const std::string &path);
std::string format_config(const ConfigFile &cfg);
void write_config(const std::string &path, const ConfigFile &cfg);

std::vector<RealVector> parse_points(const std::string &text);
std::vector<RealVector> read_points(const std::string &path);
std::string format_points(const std::vector<RealVector> &pts, std::size_t dim);
void write_points(const std::string &path, const std::vector<RealVector> &pts, std::size_t dim);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &data);

}  // namespace packstab
