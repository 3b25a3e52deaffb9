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

#include "packstab/packstab.h"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "packstab/io.hpp"
#include "packstab/report.hpp"

using namespace packstab;

struct packstab_lattice {
    Lattice lattice;
    std::string source;
};

struct packstab_config {
    ConfigFile file;
    std::string source;
};

struct packstab_points {
    std::vector<RealVector> points;
    std::size_t dim = 0;
    std::string source;
};

namespace {

thread_local std::string lastError;

template <class F>
packstab_status guarded(F &&f) {
    try {
        lastError.clear();
        return f();
    } catch (const Error &e) {
        lastError = e.what();
        return static_cast<packstab_status>(e.status());
    } catch (const std::bad_alloc &) {
        lastError = "out of memory";
        return PACKSTAB_RESOURCE;
    } catch (const std::exception &e) {
        lastError = e.what();
        return PACKSTAB_INTERNAL;
    }
}

char *dup_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char **report, const Json &j) {
    if (report) *report = dup_string(dump_report(j));
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

packstab_settings resolve(const packstab_settings *s) {
    packstab_settings out;
    packstab_settings_init(&out);
    if (s) out = *s;
    if (out.eps <= 0) out.eps = 1e-3;
    return out;
}

MagicConfig magic_config(const packstab_settings &s) {
    MagicConfig cfg = s.config_path ? load_magic_config(s.config_path) : load_magic_config(default_config_path());
    if (s.rho0 > 0) cfg.rho0 = s.rho0;
    if (s.rho1 > 0) cfg.rho1 = s.rho1;
    return cfg;
}

void add_timing(Json &report, const packstab_settings &s, const Stopwatch &w) {
    if (s.timing) report["timing"] = {{"seconds", w.seconds()}};
}

std::string digest(const std::string &source, const std::string &canonical) {
    return sha256_hex(source.empty() ? canonical : source);
}

std::string lattice_digest(const packstab_lattice *l) { return digest(l->source, format_lattice(l->lattice)); }
std::string config_digest(const packstab_config *c) { return digest(c->source, format_config(c->file)); }
std::string points_digest(const packstab_points *p) { return digest(p->source, format_points(p->points, p->dim)); }

Lattice reference_for(int dim) {
    require(dim == 8 || dim == 24, "dimension must be 8 or 24");
    return dim == 8 ? e8_short_basis() : leech_short_basis();
}

Window make_window(packstab_window_shape shape, double size, std::size_t dim) {
    require(size > 0, "window size must be positive");
    RealVector c = RealVector::Zero(static_cast<Eigen::Index>(dim));
    if (shape == PACKSTAB_WINDOW_BALL) return Window::ball(c, size);
    require(shape == PACKSTAB_WINDOW_BOX, "unknown window shape");
    return Window::cube(c, size / 2);
}

Json window_json(packstab_window_shape shape, double size) {
    return {{"shape", shape == PACKSTAB_WINDOW_BALL ? "ball" : "box"}, {"size", size}};
}

}  // namespace

extern "C" {

void packstab_settings_init(packstab_settings *settings) {
    if (!settings) return;
    settings->config_path = nullptr;
    settings->eps = 1e-3;
    settings->rho0 = 0;
    settings->rho1 = 0;
    settings->timing = 0;
}

void packstab_patch_request_init(packstab_patch_request *request) {
    if (!request) return;
    request->shape = PACKSTAB_WINDOW_BALL;
    request->size = 6;
    request->anchors = 20;
    request->seed = 1;
    request->saturate = 0;
}

const char *packstab_status_name(packstab_status status) { return status_name(static_cast<Status>(status)); }

const char *packstab_last_error(void) { return lastError.c_str(); }

void packstab_free_string(char *text) { std::free(text); }

packstab_status packstab_lattice_parse(const char *text, packstab_lattice **out) {
    return guarded([&] {
        require(text && out, "packstab_lattice_parse: null argument");
        LatticeFile f = parse_lattice(text);
        *out = new packstab_lattice{f.lattice, text};
        return PACKSTAB_OK;
    });
}

packstab_status packstab_lattice_read(const char *path, packstab_lattice **out) {
    return guarded([&] {
        require(path && out, "packstab_lattice_read: null argument");
        std::string text = read_file(path);
        LatticeFile f = parse_lattice(text);
        *out = new packstab_lattice{f.lattice, text};
        return PACKSTAB_OK;
    });
}

packstab_status packstab_lattice_from_rows(size_t dim, const double *rows, packstab_lattice **out) {
    return guarded([&] {
        require(rows && out && dim > 0, "packstab_lattice_from_rows: invalid argument");
        const auto n = static_cast<Eigen::Index>(dim);
        RealMatrix b(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k) b(k, i) = rows[i * n + k];
        *out = new packstab_lattice{Lattice(b), {}};
        return PACKSTAB_OK;
    });
}

void packstab_lattice_free(packstab_lattice *lattice) { delete lattice; }

size_t packstab_lattice_dim(const packstab_lattice *lattice) { return lattice ? lattice->lattice.dim() : 0; }

packstab_status packstab_lattice_rows(const packstab_lattice *lattice, double *rows) {
    return guarded([&] {
        require(lattice && rows, "packstab_lattice_rows: null argument");
        const RealMatrix &b = lattice->lattice.basis();
        const auto n = b.cols();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k) rows[i * n + k] = b(k, i);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_lattice_format(const packstab_lattice *lattice, char **text) {
    return guarded([&] {
        require(lattice && text, "packstab_lattice_format: null argument");
        *text = dup_string(format_lattice(lattice->lattice));
        return PACKSTAB_OK;
    });
}

packstab_status packstab_config_parse(const char *text, packstab_config **out) {
    return guarded([&] {
        require(text && out, "packstab_config_parse: null argument");
        *out = new packstab_config{parse_config(text), text};
        return PACKSTAB_OK;
    });
}

packstab_status packstab_config_read(const char *path, packstab_config **out) {
    return guarded([&] {
        require(path && out, "packstab_config_read: null argument");
        std::string text = read_file(path);
        *out = new packstab_config{parse_config(text), text};
        return PACKSTAB_OK;
    });
}

void packstab_config_free(packstab_config *config) { delete config; }

size_t packstab_config_dim(const packstab_config *config) {
    return config ? static_cast<size_t>(config->file.config.dim) : 0;
}

size_t packstab_config_size(const packstab_config *config) { return config ? config->file.config.size() : 0; }

packstab_status packstab_config_format(const packstab_config *config, char **text) {
    return guarded([&] {
        require(config && text, "packstab_config_format: null argument");
        *text = dup_string(format_config(config->file));
        return PACKSTAB_OK;
    });
}

packstab_status packstab_points_parse(const char *text, packstab_points **out) {
    return guarded([&] {
        require(text && out, "packstab_points_parse: null argument");
        std::vector<RealVector> pts = parse_points(text);
        std::size_t dim = pts.empty() ? 0 : static_cast<std::size_t>(pts.front().size());
        *out = new packstab_points{std::move(pts), dim, text};
        return PACKSTAB_OK;
    });
}

packstab_status packstab_points_read(const char *path, packstab_points **out) {
    return guarded([&] {
        require(path && out, "packstab_points_read: null argument");
        std::string text = read_file(path);
        std::vector<RealVector> pts = parse_points(text);
        std::size_t dim = pts.empty() ? 0 : static_cast<std::size_t>(pts.front().size());
        *out = new packstab_points{std::move(pts), dim, text};
        return PACKSTAB_OK;
    });
}

void packstab_points_free(packstab_points *points) { delete points; }

size_t packstab_points_dim(const packstab_points *points) { return points ? points->dim : 0; }

size_t packstab_points_count(const packstab_points *points) { return points ? points->points.size() : 0; }

packstab_status packstab_points_format(const packstab_points *points, char **text) {
    return guarded([&] {
        require(points && text, "packstab_points_format: null argument");
        *text = dup_string(format_points(points->points, points->dim));
        return PACKSTAB_OK;
    });
}

packstab_status packstab_reduce(const packstab_lattice *input, const packstab_settings *settings,
                                packstab_lattice **reduced, char **report) {
    return guarded([&] {
        require(input, "packstab_reduce: null lattice");
        packstab_settings s = resolve(settings);
        Stopwatch watch;
        LllResult red = lll_reduce_with_transform(input->lattice);
        const std::size_t n = red.lattice.dim();
        double logProduct = 0;
        for (std::size_t i = 0; i < n; ++i) logProduct += std::log2(red.lattice.vector(i).norm());
        double logDet = std::log2(red.lattice.det());
        double exponent = static_cast<double>(n * (n - 1)) / 4;
        bool ok = logProduct <= exponent + logDet + 1e-9;
        if (!ok) fail(Status::Internal, "reduced basis violates the reduction bound");
        Json results{{"basis", columns_json(red.lattice.basis())},
                     {"transform", int_matrix_json(red.transform)},
                     {"det", red.lattice.det()},
                     {"log2NormProduct", logProduct},
                     {"bound", "2^" + format_double(exponent)},
                     {"log2Bound", exponent + logDet},
                     {"boundHolds", ok}};
        Json rep = make_report("reduce", {{"lattice", lattice_digest(input)}}, {{"delta", 0.99}}, results);
        add_timing(rep, s, watch);
        if (reduced) *reduced = new packstab_lattice{red.lattice, {}};
        emit(report, rep);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_certify(const packstab_lattice *input, int dim, const packstab_settings *settings,
                                 char **report) {
    return guarded([&] {
        require(input, "packstab_certify: null lattice");
        packstab_settings s = resolve(settings);
        ToleranceParams p = make_tolerance_params(s.eps, dim, magic_config(s));
        Stopwatch watch;
        Json inputs{{"lattice", lattice_digest(input)}};
        Json results;
        packstab_status status = PACKSTAB_OK;
        try {
            StabilityCertificate cert = certify_lattice(input->lattice, dim, p);
            results = certificate_json(cert);
            if (cert.status == CertificateStatus::VerdictMismatch) {
                lastError = "lattice is not congruent to the reference lattice";
                status = PACKSTAB_REGIME;
            }
        } catch (const Error &e) {
            if (e.status() != Status::Regime) throw;
            results = {{"status", "out-of-regime"}, {"reason", e.what()}};
            lastError = e.what();
            status = PACKSTAB_REGIME;
        }
        Json rep = make_report("certify", inputs, tolerance_json(p), results);
        add_timing(rep, s, watch);
        emit(report, rep);
        return status;
    });
}

packstab_status packstab_patch(const packstab_config *config, const packstab_patch_request *request,
                               const packstab_settings *settings, char **report) {
    return guarded([&] {
        require(config && request, "packstab_patch: null argument");
        require(request->anchors > 0, "packstab_patch: anchor count must be positive");
        packstab_settings s = resolve(settings);
        const int dim = config->file.config.dim;
        require(dim == 8 || dim == 24, "packstab_patch: configuration dimension must be 8 or 24");
        ToleranceParams p = make_tolerance_params(s.eps, dim, magic_config(s));
        Stopwatch watch;
        PeriodicConfig cfg = config->file.config;
        Json results;
        if (request->saturate) {
            SaturationReport sr;
            cfg = saturate(cfg, {}, &sr);
            results["saturation"] = {{"inserted", sr.inserted},
                                     {"gridPoints", sr.gridPoints},
                                     {"effectiveSpacing", sr.effectiveSpacing}};
        }
        std::vector<std::size_t> bad = bad_set(cfg, p.normTol, p.searchRadius);
        results["badCosets"] = bad.size();
        PeriodicSource source(cfg);
        std::optional<PeriodicSource> badSource;
        if (!bad.empty()) badSource.emplace(cfg, bad);
        AnchorContext ctx;
        ctx.source = &source;
        ctx.badSource = badSource ? &*badSource : nullptr;
        ctx.dim = dim;
        ctx.params = p;
        ctx.options = AnchorOptions::for_dim(dim, magic_config(s));
        Window window = make_window(request->shape, request->size, static_cast<std::size_t>(dim));
        AnchorSummary sum = sample_anchors(ctx, cfg.period, window, request->anchors, request->seed);
        results["summary"] = summary_json(sum);
        if (!config->file.labels.empty()) {
            ExamplePacking truth;
            truth.blockScale = config->file.blockScale;
            truth.labels = config->file.labels;
            Json confusion = Json::object();
            for (BlockLabel b : {BlockLabel::Hole, BlockLabel::E8, BlockLabel::PsiE8})
                confusion[to_string(b)] = {{"anchors", 0}, {"identified", 0}, {"denseEnough", 0}};
            std::vector<std::string> labels;
            for (const AnchorReport &r : sum.reports) {
                std::string key = to_string(truth.label_at(r.anchor));
                labels.push_back(key);
                Json &row = confusion[key];
                row["anchors"] = row["anchors"].get<long>() + 1;
                if (r.flags.identified) row["identified"] = row["identified"].get<long>() + 1;
                if (r.flags.denseEnough) row["denseEnough"] = row["denseEnough"].get<long>() + 1;
            }
            results["labelConfusion"] = confusion;
            results["anchorLabels"] = labels;
        }
        Json params = tolerance_json(p);
        params["window"] = window_json(request->shape, request->size);
        params["anchors"] = request->anchors;
        params["saturate"] = request->saturate != 0;
        Json rep = make_report("patch", {{"config", config_digest(config)}}, params, results,
                               static_cast<long>(request->seed));
        add_timing(rep, s, watch);
        emit(report, rep);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_generate_example(int block_scale, uint64_t seed, packstab_config **out, char **report) {
    return guarded([&] {
        ExamplePacking ex = generate_example_packing(block_scale, seed);
        ConfigFile file{ex.config, ex.blockScale, ex.labels};
        std::size_t holes = 0;
        for (BlockLabel b : ex.labels) holes += b == BlockLabel::Hole;
        Json results{{"cosets", ex.config.size()},
                     {"blocks", ex.labels.size()},
                     {"holeBlocks", holes},
                     {"templateE8", ex.templateE8},
                     {"templatePsiE8", ex.templatePsi},
                     {"requestedDeletions", ex.requestedDeletions},
                     {"actualDeletions", ex.actualDeletions},
                     {"centerDensity", ex.config.center_density()},
                     {"psi", columns_json(ex.psi)}};
        Json rep = make_report("generate", {}, {{"kind", "example17"}, {"blockScale", block_scale}}, results,
                               static_cast<long>(seed));
        if (out) *out = new packstab_config{std::move(file), {}};
        emit(report, rep);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_generate_perturbed(int dim, int block_scale, double noise, double deletion, uint64_t seed,
                                            packstab_config **out, char **report) {
    return guarded([&] {
        PerturbedReport pr;
        PeriodicConfig cfg = generate_perturbed_config(reference_for(dim), block_scale, noise, deletion, seed, &pr);
        Json results{{"cosets", cfg.size()},
                     {"radius", cfg.radius},
                     {"requestedDeletions", pr.requestedDeletions},
                     {"attempts", pr.attempts},
                     {"centerDensity", cfg.center_density()}};
        Json params{{"kind", "perturbed"},
                    {"dim", dim},
                    {"blockScale", block_scale},
                    {"noise", noise},
                    {"deletion", deletion}};
        Json rep = make_report("generate", {}, params, results, static_cast<long>(seed));
        if (out) *out = new packstab_config{ConfigFile{cfg, 0, {}}, {}};
        emit(report, rep);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_generate_bin(packstab_window_shape shape, double size, int dim, uint64_t seed,
                                      packstab_points **points, char **report) {
    return guarded([&] {
        require(dim == 8 || dim == 24, "packstab_generate_bin: dimension must be 8 or 24");
        Window container = make_window(shape, size, static_cast<std::size_t>(dim));
        DenseBinPacking bin = dense_bin_packing(container, dim, seed);
        bool materialized = bin.materialized.size() == bin.count;
        Json results = bin_packing_json(bin);
        results["complete"] = materialized;
        Json params{{"kind", "bin"}, {"dim", dim}, {"container", window_json(shape, size)}};
        Json rep = make_report("generate", {}, params, results, static_cast<long>(seed));
        if (points) {
            *points = nullptr;
            if (materialized)
                *points = new packstab_points{std::move(bin.materialized), static_cast<std::size_t>(dim), {}};
        }
        emit(report, rep);
        return PACKSTAB_OK;
    });
}

packstab_status packstab_config_density(const packstab_config *config, char **report) {
    return guarded([&] {
        require(config, "packstab_config_density: null configuration");
        const PeriodicConfig &cfg = config->file.config;
        double density = cfg.center_density();
        Json results{{"centerDensity", density},
                     {"cosets", cfg.size()},
                     {"periodDet", cfg.period.det()},
                     {"radius", cfg.radius},
                     {"minDistance", min_distance(cfg)}};
        if (config->file.blockScale > 0) {
            results["blockScale"] = config->file.blockScale;
            results["fittedC"] = (1 - density) * config->file.blockScale;
        }
        emit(report, make_report("density", {{"config", config_digest(config)}}, Json::object(), results));
        return PACKSTAB_OK;
    });
}

packstab_status packstab_lattice_density(const packstab_lattice *lattice, char **report) {
    return guarded([&] {
        require(lattice, "packstab_lattice_density: null lattice");
        ShortestVector sv = shortest_vector(lattice->lattice);
        Json results{{"centerDensity", center_density(lattice->lattice, sv.length / 2)},
                     {"shortestLength", sv.length},
                     {"det", lattice->lattice.det()}};
        emit(report, make_report("density", {{"lattice", lattice_digest(lattice)}}, Json::object(), results));
        return PACKSTAB_OK;
    });
}

packstab_status packstab_hausdorff(const packstab_points *a, const packstab_points *b, double *distance,
                                   char **report) {
    return guarded([&] {
        require(a && b, "packstab_hausdorff: null point set");
        double d = hausdorff(a->points, b->points);
        if (distance) *distance = d;
        Json results{{"hausdorff", d}, {"countA", a->points.size()}, {"countB", b->points.size()}};
        emit(report, make_report("hausdorff", {{"a", points_digest(a)}, {"b", points_digest(b)}}, Json::object(),
                                 results));
        return PACKSTAB_OK;
    });
}

}  // extern "C"
