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

#ifndef PACKSTAB_PACKSTAB_H
#define PACKSTAB_PACKSTAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PACKSTAB_BUILDING_LIBRARY)
#define PACKSTAB_API __attribute__((visibility("default")))
#else
#define PACKSTAB_API
#endif

typedef enum packstab_status {
    PACKSTAB_OK = 0,
    PACKSTAB_CONTRACT = 1,
    PACKSTAB_PARSE = 2,
    PACKSTAB_IO = 3,
    PACKSTAB_NOT_POSITIVE_DEFINITE = 4,
    PACKSTAB_RANK = 5,
    PACKSTAB_RESOURCE = 6,
    PACKSTAB_PACKING_VIOLATION = 7,
    PACKSTAB_GENERATION = 8,
    PACKSTAB_NUMERIC = 9,
    PACKSTAB_REGIME = 10,
    PACKSTAB_INTERNAL = 11
} packstab_status;

typedef struct packstab_lattice packstab_lattice;
typedef struct packstab_config packstab_config;
typedef struct packstab_points packstab_points;

typedef struct packstab_settings {
    const char *config_path; /* constants file; NULL searches the default locations */
    double eps;              /* accuracy parameter, default 1e-3 */
    double rho0;             /* 0 keeps the configured value */
    double rho1;
    int timing;              /* nonzero adds wall-clock timings to reports */
} packstab_settings;

typedef enum packstab_window_shape { PACKSTAB_WINDOW_BALL = 0, PACKSTAB_WINDOW_BOX = 1 } packstab_window_shape;

typedef struct packstab_patch_request {
    packstab_window_shape shape;
    double size;      /* ball radius or box edge length */
    size_t anchors;
    uint64_t seed;
    int saturate;     /* nonzero saturates the configuration before sampling */
} packstab_patch_request;

PACKSTAB_API void packstab_settings_init(packstab_settings *settings);
PACKSTAB_API void packstab_patch_request_init(packstab_patch_request *request);

PACKSTAB_API const char *packstab_status_name(packstab_status status);
/* Message of the last failure on the calling thread. */
PACKSTAB_API const char *packstab_last_error(void);
PACKSTAB_API void packstab_free_string(char *text);

PACKSTAB_API packstab_status packstab_lattice_read(const char *path, packstab_lattice **out);
PACKSTAB_API packstab_status packstab_lattice_parse(const char *text, packstab_lattice **out);
/* rows: dim * dim entries, row i is basis vector i */
PACKSTAB_API packstab_status packstab_lattice_from_rows(size_t dim, const double *rows, packstab_lattice **out);
PACKSTAB_API void packstab_lattice_free(packstab_lattice *lattice);
PACKSTAB_API size_t packstab_lattice_dim(const packstab_lattice *lattice);
PACKSTAB_API packstab_status packstab_lattice_rows(const packstab_lattice *lattice, double *rows);
PACKSTAB_API packstab_status packstab_lattice_format(const packstab_lattice *lattice, char **text);

PACKSTAB_API packstab_status packstab_config_read(const char *path, packstab_config **out);
PACKSTAB_API packstab_status packstab_config_parse(const char *text, packstab_config **out);
PACKSTAB_API void packstab_config_free(packstab_config *config);
PACKSTAB_API size_t packstab_config_dim(const packstab_config *config);
PACKSTAB_API size_t packstab_config_size(const packstab_config *config);
PACKSTAB_API packstab_status packstab_config_format(const packstab_config *config, char **text);

PACKSTAB_API packstab_status packstab_points_read(const char *path, packstab_points **out);
PACKSTAB_API packstab_status packstab_points_parse(const char *text, packstab_points **out);
PACKSTAB_API void packstab_points_free(packstab_points *points);
PACKSTAB_API size_t packstab_points_dim(const packstab_points *points);
PACKSTAB_API size_t packstab_points_count(const packstab_points *points);
PACKSTAB_API packstab_status packstab_points_format(const packstab_points *points, char **text);

/* Commands fill *report with a JSON document to be released by packstab_free_string.
   A report is produced for PACKSTAB_REGIME outcomes as well. */
PACKSTAB_API packstab_status packstab_reduce(const packstab_lattice *input, const packstab_settings *settings,
                                             packstab_lattice **reduced, char **report);
PACKSTAB_API packstab_status packstab_certify(const packstab_lattice *input, int dim, const packstab_settings *settings,
                                              char **report);
PACKSTAB_API packstab_status packstab_patch(const packstab_config *config, const packstab_patch_request *request,
                                            const packstab_settings *settings, char **report);
PACKSTAB_API packstab_status packstab_generate_example(int block_scale, uint64_t seed, packstab_config **out,
                                                       char **report);
PACKSTAB_API packstab_status packstab_generate_perturbed(int dim, int block_scale, double noise, double deletion,
                                                         uint64_t seed, packstab_config **out, char **report);
/* points may be NULL; it is filled only when the packing fits the materialization budget. */
PACKSTAB_API packstab_status packstab_generate_bin(packstab_window_shape shape, double size, int dim, uint64_t seed,
                                                   packstab_points **points, char **report);
PACKSTAB_API packstab_status packstab_config_density(const packstab_config *config, char **report);
PACKSTAB_API packstab_status packstab_lattice_density(const packstab_lattice *lattice, char **report);
PACKSTAB_API packstab_status packstab_hausdorff(const packstab_points *a, const packstab_points *b, double *distance,
                                                char **report);

#ifdef __cplusplus
}
#endif

#endif
