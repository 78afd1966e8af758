/*
 * Copyright 2026 The pbihs Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the pbihs pseudo-Boolean optimizer.
 *
 * All handles are opaque. Functions returning pbihs_error leave their
 * output untouched on failure; pbihs_last_error() then describes the
 * failure for the calling thread. Costs are decimal strings because they
 * may exceed 64 bits. Strings returned by accessors live as long as the
 * handle they came from.
 */

#ifndef PBIHS_PBIHS_H_
#define PBIHS_PBIHS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PBIHS_BUILDING_LIBRARY)
#define PBIHS_API __attribute__((visibility("default")))
#else
#define PBIHS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pbihs_error {
  PBIHS_OK = 0,
  PBIHS_ERR_INVALID_ARGUMENT = 1,
  PBIHS_ERR_PARSE = 2,
  PBIHS_ERR_IO = 3,
  PBIHS_ERR_INTERNAL = 4
} pbihs_error;

typedef enum pbihs_status {
  PBIHS_OPTIMUM = 0,
  PBIHS_SATISFIABLE = 1,
  PBIHS_UNSATISFIABLE = 2,
  PBIHS_UNKNOWN = 3
} pbihs_status;

typedef struct pbihs_instance pbihs_instance;
typedef struct pbihs_config pbihs_config;
typedef struct pbihs_result pbihs_result;
typedef struct pbihs_check_result pbihs_check_result;
typedef struct pbihs_bench_result pbihs_bench_result;

/* Called with each improved cost while solving. */
typedef void (*pbihs_improvement_fn)(const char* cost, void* user_data);

PBIHS_API const char* pbihs_version(void);
PBIHS_API const char* pbihs_last_error(void);

/* Instances. */
PBIHS_API pbihs_error pbihs_instance_from_file(const char* path, pbihs_instance** out);
PBIHS_API pbihs_error pbihs_instance_from_string(const char* opb_text, pbihs_instance** out);
PBIHS_API void pbihs_instance_free(pbihs_instance* inst);
PBIHS_API uint32_t pbihs_instance_num_vars(const pbihs_instance* inst);
PBIHS_API size_t pbihs_instance_num_constraints(const pbihs_instance* inst);

/* Configuration. Keys: backend (sis|sis-reified|cg|cb|sls-only),
 * hybrid (none|optlb|alllb|forcelb), sls (on|off), seeding (on|off),
 * seed, time-limit (seconds), cb-budget, proof (output path),
 * stats (output path). */
PBIHS_API pbihs_error pbihs_config_new(pbihs_config** out);
PBIHS_API void pbihs_config_free(pbihs_config* cfg);
PBIHS_API pbihs_error pbihs_config_set(pbihs_config* cfg, const char* key, const char* value);
PBIHS_API void pbihs_config_set_improvement_callback(pbihs_config* cfg, pbihs_improvement_fn fn,
                                                     void* user_data);

/* Solving. pbihs_interrupt is async-signal-safe and stops every running
 * solve, which then reports its incumbent. */
PBIHS_API pbihs_error pbihs_solve(const pbihs_instance* inst, const pbihs_config* cfg, pbihs_result** out);
PBIHS_API void pbihs_interrupt(void);
PBIHS_API void pbihs_clear_interrupt(void);

PBIHS_API void pbihs_result_free(pbihs_result* r);
PBIHS_API pbihs_status pbihs_result_status(const pbihs_result* r);
/* Decimal cost of the incumbent, or NULL when there is none. */
PBIHS_API const char* pbihs_result_cost(const pbihs_result* r);
PBIHS_API const char* pbihs_result_lower_bound(const pbihs_result* r);
/* 1 or 0 for the incumbent's value of variable var, -1 when unavailable. */
PBIHS_API int pbihs_result_value(const pbihs_result* r, uint32_t var);
/* The "s"/"v" block (without the "o" line). */
PBIHS_API const char* pbihs_result_output(const pbihs_result* r);
PBIHS_API const char* pbihs_result_stats(const pbihs_result* r);
PBIHS_API const char* pbihs_result_timing(const pbihs_result* r);
PBIHS_API uint64_t pbihs_result_iterations(const pbihs_result* r);

/* Proof checking. */
PBIHS_API pbihs_error pbihs_check_files(const char* opb_path, const char* proof_path, pbihs_check_result** out);
PBIHS_API void pbihs_check_result_free(pbihs_check_result* r);
PBIHS_API int pbihs_check_accepted(const pbihs_check_result* r);
PBIHS_API int pbihs_check_infeasible(const pbihs_check_result* r);
/* Accepted optimal cost, or NULL. */
PBIHS_API const char* pbihs_check_cost(const pbihs_check_result* r);
/* One-line verdict with the failing step on rejection. */
PBIHS_API const char* pbihs_check_message(const pbihs_check_result* r);

/* Benchmarks. configs uses the bench config syntax, e.g. "cg,sis+sls". */
PBIHS_API pbihs_error pbihs_bench(const char* dir, const char* configs, double time_limit_seconds,
                                  const char* csv_path, pbihs_bench_result** out);
PBIHS_API void pbihs_bench_result_free(pbihs_bench_result* r);
PBIHS_API size_t pbihs_bench_rows(const pbihs_bench_result* r);
PBIHS_API const char* pbihs_bench_summary(const pbihs_bench_result* r);

#ifdef __cplusplus
}
#endif

#endif /* PBIHS_PBIHS_H_ */
