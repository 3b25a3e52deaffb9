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

#include "packstab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "packstab/error.hpp"

namespace packstab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double rational_to_double(const mpq_class &q) {
    if (sgn(q) == 0) return 0.0;
    mpz_class num = abs(q.get_num()), den = q.get_den();
    long shift = 55 - (static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
                       static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)));
    if (shift > 0)
        num <<= static_cast<mp_bitcnt_t>(shift);
    else
        den <<= static_cast<mp_bitcnt_t>(-shift);
    mpz_class quot, rem;
    mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    bool sticky = rem != 0;
    long bits = static_cast<long>(mpz_sizeinbase(quot.get_mpz_t(), 2));
    long e2 = bits - 1 - shift;
    long precision = e2 >= -1022 ? 53 : 53 - (-1022 - e2);
    long drop = bits - precision;
    if (precision <= 0) {
        // below half the smallest subnormal unless exactly rounding up
        if (precision < 0) return sgn(q) < 0 ? -0.0 : 0.0;
        drop = bits;
    }
    mpz_class kept = quot >> static_cast<mp_bitcnt_t>(drop);
    bool half = mpz_tstbit(quot.get_mpz_t(), static_cast<mp_bitcnt_t>(drop - 1));
    bool below = sticky || mpz_scan1(quot.get_mpz_t(), 0) < static_cast<mp_bitcnt_t>(drop - 1);
    if (half && (below || mpz_odd_p(kept.get_mpz_t()))) ++kept;
    double r = std::ldexp(kept.get_d(), static_cast<int>(drop - shift));
    return sgn(q) < 0 ? -r : r;
}

mpq_class parse_rational(const std::string &token, std::size_t line) {
    auto bad = [&]() -> mpq_class { throw ParseError(line, "malformed number '" + token + "'"); };
    if (token.empty()) return bad();
    std::size_t slash = token.find('/');
    if (slash != std::string::npos) {
        mpz_class p, q;
        if (p.set_str(token.substr(0, slash), 10) != 0 || q.set_str(token.substr(slash + 1), 10) != 0) return bad();
        if (q == 0) throw ParseError(line, "zero denominator in '" + token + "'");
        mpq_class r(p, q);
        r.canonicalize();
        return r;
    }
    // decimal with optional exponent, converted exactly
    std::size_t pos = 0;
    bool neg = false;
    if (token[pos] == '+' || token[pos] == '-') neg = token[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool seenDot = false, any = false;
    for (; pos < token.size(); ++pos) {
        char ch = token[pos];
        if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            any = true;
            if (seenDot) --scale;
        } else if (ch == '.' && !seenDot) {
            seenDot = true;
        } else {
            break;
        }
    }
    if (!any) return bad();
    if (pos < token.size()) {
        if (token[pos] != 'e' && token[pos] != 'E') return bad();
        std::string ex = token.substr(pos + 1);
        if (ex.empty()) return bad();
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(ex, &used);
        } catch (const std::exception &) {
            return bad();
        }
        if (used != ex.size() || e > 4000 || e < -4000) return bad();
        scale += e;
    }
    mpz_class num(digits, 10);
    if (neg) num = -num;
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
    mpq_class r = scale < 0 ? mpq_class(num, pow10) : mpq_class(num * pow10);
    r.canonicalize();
    return r;
}

namespace {

struct LineReader {
    std::istringstream in;
    std::size_t line = 0;

    explicit LineReader(const std::string &text) : in(text) {}

    // Next non-empty line without comments, split into tokens; false at end of input.
    bool next(std::vector<std::string> &tokens) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line;
            std::string body = raw.substr(0, raw.find('#'));
            std::istringstream ss(body);
            tokens.clear();
            std::string t;
            while (ss >> t) tokens.push_back(t);
            if (!tokens.empty()) return true;
        }
        return false;
    }

    std::vector<std::string> expect(const char *what) {
        std::vector<std::string> t;
        if (!next(t)) throw ParseError(line + 1, std::string("unexpected end of input, expected ") + what);
        return t;
    }
};

long parse_count(const std::vector<std::string> &t, const char *keyword, std::size_t line) {
    if (t.size() != 2 || t[0] != keyword) throw ParseError(line, std::string("expected '") + keyword + " <count>'");
    try {
        std::size_t used = 0;
        long v = std::stol(t[1], &used);
        if (used != t[1].size() || v < 0) throw std::invalid_argument("count");
        return v;
    } catch (const std::exception &) {
        throw ParseError(line, "malformed count '" + t[1] + "'");
    }
}

RealVector parse_row(LineReader &r, std::size_t n, std::size_t rowNo, std::vector<mpq_class> *exact) {
    auto t = r.expect("a row");
    if (t.size() != n)
        throw ParseError(r.line, "row " + std::to_string(rowNo) + ": expected " + std::to_string(n) + " entries, found " +
                                     std::to_string(t.size()));
    RealVector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (exact) {
            mpq_class q = parse_rational(t[i], r.line);
            v[static_cast<Eigen::Index>(i)] = rational_to_double(q);
            // decimal entries keep the nearest double, rationals their exact value
            if (t[i].find('/') == std::string::npos) v[static_cast<Eigen::Index>(i)] = std::stod(t[i]);
            exact->push_back(q);
        } else {
            parse_rational(t[i], r.line);
            v[static_cast<Eigen::Index>(i)] = std::stod(t[i]);
        }
    }
    return v;
}

RealMatrix parse_basis_block(LineReader &r, std::size_t &n, std::vector<mpq_class> *exact) {
    auto t = r.expect("'dim <n>'");
    long d = parse_count(t, "dim", r.line);
    if (d < 1 || d > 64) throw ParseError(r.line, "dimension must lie in [1, 64]");
    n = static_cast<std::size_t>(d);
    RealMatrix b(d, d);
    for (std::size_t i = 0; i < n; ++i) b.col(static_cast<Eigen::Index>(i)) = parse_row(r, n, i + 1, exact);
    return b;
}

std::string format_row(const RealVector &v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    s += '\n';
    return s;
}

}  // namespace

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Status::Io, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Status::Io, "cannot write " + path);
    out << data;
    if (!out) fail(Status::Io, "write failed for " + path);
}

LatticeFile parse_lattice(const std::string &text) {
    LineReader r(text);
    LatticeFile f;
    std::size_t n = 0;
    RealMatrix b = parse_basis_block(r, n, &f.exact);
    std::vector<std::string> extra;
    if (r.next(extra)) throw ParseError(r.line, "trailing content after the basis");
    try {
        f.lattice = Lattice(b);
    } catch (const Error &e) {
        throw ParseError(r.line, std::string("basis rejected: ") + e.what());
    }
    return f;
}

LatticeFile read_lattice(const std::string &path) { return parse_lattice(read_file(path)); }

std::string format_lattice(const Lattice &lat) {
    std::string s = "dim " + std::to_string(lat.dim()) + "\n";
    for (std::size_t i = 0; i < lat.dim(); ++i) s += format_row(lat.vector(i));
    return s;
}

void write_lattice(const std::string &path, const Lattice &lat) { write_file(path, format_lattice(lat)); }

ConfigFile parse_config(const std::string &text) {
    LineReader r(text);
    ConfigFile f;
    std::size_t n = 0;
    RealMatrix b = parse_basis_block(r, n, nullptr);
    auto t = r.expect("'cosets <m>'");
    long m = parse_count(t, "cosets", r.line);
    std::vector<RealVector> cosets;
    for (long i = 0; i < m; ++i) cosets.push_back(parse_row(r, n, static_cast<std::size_t>(i) + 1, nullptr));
    t = r.expect("'radius <r>'");
    if (t.size() != 2 || t[0] != "radius") throw ParseError(r.line, "expected 'radius <r>'");
    double radius = rational_to_double(parse_rational(t[1], r.line));
    if (t[1].find('/') == std::string::npos) radius = std::stod(t[1]);
    while (r.next(t)) {
        if (t.size() == 2 && t[0] == "blockscale") {
            f.blockScale = static_cast<int>(parse_count(t, "blockscale", r.line));
        } else if (t.size() == 2 && t[0] == "labels") {
            long k = parse_count(t, "labels", r.line);
            for (long i = 0; i < k; ++i) {
                auto row = r.expect("a block label");
                if (row.size() != 1) throw ParseError(r.line, "expected a single block label");
                try {
                    f.labels.push_back(parse_block_label(row[0]));
                } catch (const Error &e) {
                    throw ParseError(r.line, e.what());
                }
            }
        } else {
            throw ParseError(r.line, "unexpected line '" + t[0] + "'");
        }
    }
    std::size_t lineAtEnd = r.line;
    try {
        f.config = make_periodic_config(Lattice(b), std::move(cosets), radius);
    } catch (const PackingViolationError &) {
        throw;
    } catch (const Error &e) {
        throw ParseError(lineAtEnd, std::string("config rejected: ") + e.what());
    }
    return f;
}

ConfigFile read_config(const std::string &path) { return parse_config(read_file(path)); }

std::string format_config(const ConfigFile &cfg) {
    const PeriodicConfig &c = cfg.config;
    std::string s = format_lattice(c.period);
    s += "cosets " + std::to_string(c.cosets.size()) + "\n";
    for (const RealVector &v : c.cosets) s += format_row(v);
    s += "radius " + format_double(c.radius) + "\n";
    if (cfg.blockScale) s += "blockscale " + std::to_string(cfg.blockScale) + "\n";
    if (!cfg.labels.empty()) {
        s += "labels " + std::to_string(cfg.labels.size()) + "\n";
        for (BlockLabel l : cfg.labels) s += to_string(l) + "\n";
    }
    return s;
}

void write_config(const std::string &path, const ConfigFile &cfg) { write_file(path, format_config(cfg)); }

std::vector<RealVector> parse_points(const std::string &text) {
    LineReader r(text);
    auto t = r.expect("'dim <n>'");
    long d = parse_count(t, "dim", r.line);
    if (d < 1 || d > 64) throw ParseError(r.line, "dimension must lie in [1, 64]");
    t = r.expect("'points <m>'");
    long m = parse_count(t, "points", r.line);
    std::vector<RealVector> pts;
    for (long i = 0; i < m; ++i) pts.push_back(parse_row(r, static_cast<std::size_t>(d), static_cast<std::size_t>(i) + 1, nullptr));
    if (r.next(t)) throw ParseError(r.line, "trailing content after the points");
    return pts;
}

std::vector<RealVector> read_points(const std::string &path) { return parse_points(read_file(path)); }

std::string format_points(const std::vector<RealVector> &pts, std::size_t dim) {
    std::string s = "dim " + std::to_string(dim) + "\npoints " + std::to_string(pts.size()) + "\n";
    for (const RealVector &p : pts) s += format_row(p);
    return s;
}

void write_points(const std::string &path, const std::vector<RealVector> &pts, std::size_t dim) {
    write_file(path, format_points(pts, dim));
}

}  // namespace packstab
