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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "packstab/packstab.h"

namespace {

struct Common {
    std::string constants;
    std::string reportPath;
    double eps = 1e-3;
    double rho0 = 0, rho1 = 0;
    bool timing = false;

    packstab_settings settings() const {
        packstab_settings s;
        packstab_settings_init(&s);
        s.config_path = constants.empty() ? nullptr : constants.c_str();
        s.eps = eps;
        s.rho0 = rho0;
        s.rho1 = rho1;
        s.timing = timing ? 1 : 0;
        return s;
    }
};

struct WindowSpec {
    packstab_window_shape shape = PACKSTAB_WINDOW_BALL;
    double size = 6;
};

WindowSpec parse_window(const std::string &text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("window", "expected ball:R or box:a");
    std::string kind = text.substr(0, colon);
    WindowSpec w;
    if (kind == "ball")
        w.shape = PACKSTAB_WINDOW_BALL;
    else if (kind == "box")
        w.shape = PACKSTAB_WINDOW_BOX;
    else
        throw CLI::ValidationError("window", "unknown shape '" + kind + "'");
    try {
        w.size = std::stod(text.substr(colon + 1));
    } catch (const std::exception &) {
        throw CLI::ValidationError("window", "bad size in '" + text + "'");
    }
    if (!(w.size > 0)) throw CLI::ValidationError("window", "size must be positive");
    return w;
}

int exit_code(packstab_status s) {
    if (s == PACKSTAB_OK) return 0;
    return s == PACKSTAB_REGIME ? 2 : 1;
}

void report_error(packstab_status s) {
    std::cerr << "error: " << packstab_status_name(s) << ": " << packstab_last_error() << "\n";
}

bool write_text(const std::string &path, const char *text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "error: io: cannot write " << path << "\n";
        return false;
    }
    out << text;
    return static_cast<bool>(out);
}

// Writes the report to the requested path or stdout, then releases it.
bool publish(const Common &c, char *report) {
    if (!report) return true;
    bool ok = true;
    if (c.reportPath.empty())
        std::fputs(report, stdout);
    else
        ok = write_text(c.reportPath, report);
    packstab_free_string(report);
    return ok;
}

int finish(const Common &c, packstab_status s, char *report) {
    bool ok = publish(c, report);
    if (s != PACKSTAB_OK) report_error(s);
    if (!ok) return 1;
    return exit_code(s);
}

std::string slurp(const std::string &path, bool &ok) {
    std::ifstream in(path, std::ios::binary);
    ok = static_cast<bool>(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void add_common(CLI::App *cmd, Common &c, bool tolerances) {
    cmd->add_option("--constants", c.constants, "constants file (key = value)");
    cmd->add_option("--report", c.reportPath, "write the JSON report here instead of stdout");
    cmd->add_flag("--timing", c.timing, "include wall-clock timings in the report");
    if (tolerances) {
        cmd->add_option("--eps", c.eps, "accuracy parameter")->check(CLI::PositiveNumber);
        cmd->add_option("--rho0", c.rho0, "dimension-8 model constant");
        cmd->add_option("--rho1", c.rho1, "dimension-24 model constant");
    }
}

int run_reduce(const Common &c, const std::string &in, const std::string &out) {
    packstab_lattice *lat = nullptr;
    packstab_status s = packstab_lattice_read(in.c_str(), &lat);
    if (s != PACKSTAB_OK) return finish(c, s, nullptr);
    packstab_settings settings = c.settings();
    packstab_lattice *red = nullptr;
    char *report = nullptr;
    s = packstab_reduce(lat, &settings, &red, &report);
    packstab_lattice_free(lat);
    if (s == PACKSTAB_OK && !out.empty()) {
        char *text = nullptr;
        s = packstab_lattice_format(red, &text);
        if (s == PACKSTAB_OK) {
            bool ok = write_text(out, text);
            packstab_free_string(text);
            if (!ok) {
                packstab_lattice_free(red);
                packstab_free_string(report);
                return 1;
            }
        }
    }
    packstab_lattice_free(red);
    return finish(c, s, report);
}

int run_certify(const Common &c, const std::string &in, int dim) {
    packstab_lattice *lat = nullptr;
    packstab_status s = packstab_lattice_read(in.c_str(), &lat);
    if (s != PACKSTAB_OK) return finish(c, s, nullptr);
    packstab_settings settings = c.settings();
    char *report = nullptr;
    s = packstab_certify(lat, dim, &settings, &report);
    packstab_lattice_free(lat);
    return finish(c, s, report);
}

int run_patch(const Common &c, const std::string &in, const WindowSpec &w, std::size_t anchors, std::uint64_t seed,
              bool saturate) {
    packstab_config *cfg = nullptr;
    packstab_status s = packstab_config_read(in.c_str(), &cfg);
    if (s != PACKSTAB_OK) return finish(c, s, nullptr);
    packstab_settings settings = c.settings();
    packstab_patch_request req;
    packstab_patch_request_init(&req);
    req.shape = w.shape;
    req.size = w.size;
    req.anchors = anchors;
    req.seed = seed;
    req.saturate = saturate ? 1 : 0;
    char *report = nullptr;
    s = packstab_patch(cfg, &req, &settings, &report);
    packstab_config_free(cfg);
    return finish(c, s, report);
}

struct GenerateArgs {
    std::string kind;
    std::string out;
    int blockScale = 2;
    int dim = 8;
    double noise = 0;
    double deletion = 0;
    std::string container = "ball:16";
    std::uint64_t seed = 1;
};

int run_generate(const Common &c, const GenerateArgs &g) {
    char *report = nullptr;
    char *text = nullptr;
    packstab_status s;
    if (g.kind == "bin") {
        WindowSpec w = parse_window(g.container);
        packstab_points *pts = nullptr;
        s = packstab_generate_bin(w.shape, w.size, g.dim, g.seed, g.out.empty() ? nullptr : &pts, &report);
        if (s == PACKSTAB_OK && !g.out.empty()) {
            if (!pts) {
                packstab_free_string(report);
                std::cerr << "error: resource: packing too large to write as a point file\n";
                return 1;
            }
            s = packstab_points_format(pts, &text);
        }
        packstab_points_free(pts);
    } else {
        packstab_config *cfg = nullptr;
        if (g.kind == "example17")
            s = packstab_generate_example(g.blockScale, g.seed, &cfg, &report);
        else
            s = packstab_generate_perturbed(g.dim, g.blockScale, g.noise, g.deletion, g.seed, &cfg, &report);
        if (s == PACKSTAB_OK) s = packstab_config_format(cfg, &text);
        packstab_config_free(cfg);
    }
    if (text) {
        bool ok = g.out.empty() ? std::fputs(text, stdout) >= 0 : write_text(g.out, text);
        packstab_free_string(text);
        if (!ok) {
            packstab_free_string(report);
            return 1;
        }
        if (g.out.empty()) {
            packstab_free_string(report);
            report = nullptr;
        }
    }
    return finish(c, s, report);
}

int run_density(const Common &c, const std::string &in) {
    bool readable = false;
    std::string text = slurp(in, readable);
    if (!readable) {
        std::cerr << "error: io: cannot open " << in << "\n";
        return 1;
    }
    char *report = nullptr;
    packstab_status s;
    if (text.find("cosets") != std::string::npos) {
        packstab_config *cfg = nullptr;
        s = packstab_config_parse(text.c_str(), &cfg);
        if (s == PACKSTAB_OK) s = packstab_config_density(cfg, &report);
        packstab_config_free(cfg);
    } else {
        packstab_lattice *lat = nullptr;
        s = packstab_lattice_parse(text.c_str(), &lat);
        if (s == PACKSTAB_OK) s = packstab_lattice_density(lat, &report);
        packstab_lattice_free(lat);
    }
    return finish(c, s, report);
}

int run_hausdorff(const Common &c, const std::string &a, const std::string &b) {
    packstab_points *pa = nullptr, *pb = nullptr;
    packstab_status s = packstab_points_read(a.c_str(), &pa);
    if (s == PACKSTAB_OK) s = packstab_points_read(b.c_str(), &pb);
    char *report = nullptr;
    if (s == PACKSTAB_OK) s = packstab_hausdorff(pa, pb, nullptr, &report);
    packstab_points_free(pa);
    packstab_points_free(pb);
    return finish(c, s, report);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Stability analysis for E8 and Leech lattice packings"};
    app.require_subcommand(1);
    Common common;

    std::string input, output;
    auto *reduce = app.add_subcommand("reduce", "LLL-reduce a lattice basis");
    reduce->add_option("input", input, "lattice file")->required();
    reduce->add_option("-o,--output", output, "reduced lattice file");
    add_common(reduce, common, false);

    int dim = 8;
    auto *certify = app.add_subcommand("certify", "certify closeness to E8 or the Leech lattice");
    certify->add_option("input", input, "lattice file")->required();
    certify->add_option("--dim", dim, "reference dimension")->check(CLI::IsMember({8, 24}));
    add_common(certify, common, true);

    std::string windowText = "ball:6";
    std::size_t anchors = 20;
    std::uint64_t seed = 1;
    bool saturate = false;
    auto *patch = app.add_subcommand("patch", "analyze anchors of a periodic configuration");
    patch->add_option("input", input, "configuration file")->required();
    patch->add_option("--window", windowText, "ball:R or box:a");
    patch->add_option("--anchors", anchors, "number of anchors")->check(CLI::PositiveNumber);
    patch->add_option("--seed", seed, "anchor seed");
    patch->add_flag("--saturate", saturate, "saturate the configuration first");
    add_common(patch, common, true);

    GenerateArgs gen;
    auto *generate = app.add_subcommand("generate", "generate configurations and bin packings");
    generate->add_option("--kind", gen.kind, "example17, perturbed or bin")
        ->required()
        ->check(CLI::IsMember({"example17", "perturbed", "bin"}));
    generate->add_option("-R,--block-scale", gen.blockScale, "block scale R")->check(CLI::Range(1, 1 << 20));
    generate->add_option("--dim", gen.dim, "dimension")->check(CLI::IsMember({8, 24}));
    generate->add_option("--noise", gen.noise, "coset displacement bound")->check(CLI::NonNegativeNumber);
    generate->add_option("--deletion", gen.deletion, "fraction of deleted cosets")->check(CLI::Range(0.0, 1.0));
    generate->add_option("--container", gen.container, "bin container, ball:R or box:a");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("-o,--output", gen.out, "output file");
    add_common(generate, common, false);

    auto *density = app.add_subcommand("density", "center density of a lattice or configuration");
    density->add_option("input", input, "lattice or configuration file")->required();
    add_common(density, common, false);

    std::string other;
    auto *haus = app.add_subcommand("hausdorff", "Hausdorff distance between two point files");
    haus->add_option("a", input, "first point file")->required();
    haus->add_option("b", other, "second point file")->required();
    add_common(haus, common, false);

    WindowSpec window;
    try {
        app.parse(argc, argv);
        if (patch->parsed()) window = parse_window(windowText);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        if (reduce->parsed()) return run_reduce(common, input, output);
        if (certify->parsed()) return run_certify(common, input, dim);
        if (patch->parsed()) return run_patch(common, input, window, anchors, seed, saturate);
        if (generate->parsed()) return run_generate(common, gen);
        if (density->parsed()) return run_density(common, input);
        if (haus->parsed()) return run_hausdorff(common, input, other);
    } catch (const CLI::ValidationError &e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
