// Copyright 2026 pobstacle developers
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

/* C interface of the pobstacle library. */

#ifndef POBS_POBS_H
#define POBS_POBS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as CLI exit codes. */
typedef enum pobs_status {
  POBS_OK = 0,
  POBS_ERR_INPUT = 1,
  POBS_ERR_NONCONVERGED = 2,
  POBS_ERR_VERIFY = 3,
  POBS_ERR_INTERNAL = 4
} pobs_status;

typedef struct pobs_scenario pobs_scenario;
typedef struct pobs_run pobs_run;
typedef struct pobs_result pobs_result;

const char* pobs_version(void);

/* Message of the last failing call on this thread ("" if none). */
const char* pobs_last_error(void);

/* Scenarios */
pobs_status pobs_scenario_load(const char* path, pobs_scenario** out);
pobs_status pobs_scenario_parse(const char* text, pobs_scenario** out);
const char* pobs_scenario_name(const pobs_scenario* sc);
void pobs_scenario_free(pobs_scenario* sc);

/* Commands. On POBS_OK, POBS_ERR_NONCONVERGED and POBS_ERR_VERIFY a run
 * handle is returned in *out; otherwise *out is NULL. */
pobs_status pobs_cmd_solve(const pobs_scenario* sc, const char* out_dir, pobs_run** out);
pobs_status pobs_cmd_verify(const pobs_scenario* sc, const char* out_dir, pobs_run** out);
pobs_status pobs_cmd_convergence(const pobs_scenario* sc, const char* out_dir, pobs_run** out);
pobs_status pobs_cmd_ineq(long trials, uint64_t seed, int swap_sides, pobs_run** out);

const char* pobs_run_text(const pobs_run* run);
size_t pobs_run_file_count(const pobs_run* run);
const char* pobs_run_file(const pobs_run* run, size_t i);
void pobs_run_free(pobs_run* run);

/* Direct solve of the scenario's level-0 grid. */
pobs_status pobs_solve(const pobs_scenario* sc, pobs_result** out);
int pobs_result_dim(const pobs_result* r);
int pobs_result_nx(const pobs_result* r, int axis);
int pobs_result_nt(const pobs_result* r);
/* Node values, time-major: index = k * space_size + i (+ j * nx0 in 2D). */
const double* pobs_result_values(const pobs_result* r);
size_t pobs_result_size(const pobs_result* r);
int pobs_result_converged(const pobs_result* r);
void pobs_result_free(pobs_result* r);

/* Flux kernels on a gradient of length n (1 or 2). */
pobs_status pobs_flux(const double* grad, int n, double p, double eps, double* out);
pobs_status pobs_f_map(const double* grad, int n, double p, double* out);

#ifdef __cplusplus
}
#endif

#endif /* POBS_POBS_H */
