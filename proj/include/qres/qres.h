// Copyright 2026 The qreservoir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the qreservoir simulator.
 *
 * Every function returns a qres_status. On failure the message is kept in
 * thread-local storage and read back with qres_last_error(). Strings handed
 * out by the library are released with qres_string_free(). */
#ifndef QRES_QRES_H_
#define QRES_QRES_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QRES_API __declspec(dllexport)
#else
#define QRES_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  QRES_OK = 0,
  QRES_INVALID_ARGUMENT = 1,
  QRES_DIMENSION_MISMATCH = 2,
  QRES_NOT_HERMITIAN = 3,
  QRES_DEGENERATE_KERNEL = 4,
  QRES_NOT_CONVERGED = 5,
  QRES_BUDGET_EXCEEDED = 6,
  QRES_CONFIG = 7,
  QRES_IO = 8,
  QRES_NOISE_TOO_STRONG = 9,
  QRES_SINGULAR_MATRIX = 10,
  QRES_INTERNAL = 99
} qres_status;

typedef struct qres_config qres_config;
typedef struct qres_model qres_model;
typedef struct qres_state qres_state;

typedef struct {
  const char* output_dir; /* NULL keeps run.output from the config */
  int has_seed;           /* nonzero: seed overrides run.seed */
  uint64_t seed;
  int threads;      /* worker pool size, >= 1 */
  int write_files;  /* zero: compute and return JSON only */
  int shard_index;  /* sweeps */
  int shard_count;
} qres_run_options;

QRES_API const char* qres_version(void);
QRES_API const char* qres_status_name(qres_status status);
/* Message of the last failure on this thread, "" if none. */
QRES_API const char* qres_last_error(void);
QRES_API void qres_string_free(char* s);
QRES_API void qres_run_options_init(qres_run_options* options);

/* Configuration: a scenario file, optionally with [sweep] and [ablation]. */
QRES_API qres_status qres_config_load(const char* path, qres_config** out);
QRES_API qres_status qres_config_parse(const char* toml_text, qres_config** out);
/* Fully resolved configuration tree as JSON. */
QRES_API qres_status qres_config_resolved(const qres_config* config, char** json_out);
QRES_API void qres_config_free(qres_config* config);

/* Commands. Each writes its files (unless write_files is zero) and returns a
 * JSON summary in *json_out. */
QRES_API qres_status qres_simulate(const qres_config* config, const qres_run_options* options, char** json_out);
QRES_API qres_status qres_sweep(const qres_config* config, const qres_run_options* options, char** json_out);
/* toggles: comma-separated names, or NULL for [ablation].toggles. */
QRES_API qres_status qres_ablate(const qres_config* config, const char* toggles, const qres_run_options* options,
                                 char** json_out);
QRES_API qres_status qres_shadows(const qres_config* config, const qres_run_options* options, char** json_out);
QRES_API qres_status qres_tomography(const qres_config* config, const qres_run_options* options, char** json_out);
QRES_API qres_status qres_calibrate_shadows(const qres_config* config, const qres_run_options* options,
                                            char** json_out);

/* Model and state access. */
QRES_API qres_status qres_model_build(const qres_config* config, qres_model** out);
QRES_API int qres_model_dimension(const qres_model* model);
QRES_API void qres_model_free(qres_model* model);

/* Steady state, or period-averaged state for driven models. Qubit register. */
QRES_API qres_status qres_model_steady_state(const qres_model* model, qres_state** out);
/* Evolve from a basis label (gg, ge, eg, ee) for duration_us; qubit register. */
QRES_API qres_status qres_model_evolve(const qres_model* model, const char* initial, double duration_us,
                                       qres_state** out);
QRES_API void qres_state_free(qres_state* state);

/* Two-qubit state entries, row-major 4x4 arrays of real and imaginary parts. */
QRES_API qres_status qres_state_matrix(const qres_state* state, double* re, double* im);
/* target: "minus" or "plus"; phase in radians. */
QRES_API qres_status qres_state_fidelity(const qres_state* state, const char* target, double phase, double* out);
/* Populations of gg, psi+, psi-, ee at the given phase. */
QRES_API qres_status qres_state_populations(const qres_state* state, double phase, double out[4]);
QRES_API qres_status qres_state_purity(const qres_state* state, double* out);

#ifdef __cplusplus
}
#endif

#endif /* QRES_QRES_H_ */
