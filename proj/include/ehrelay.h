/*
Copyright 2026 ehrelay contributors

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

/*
 * C interface to the energy-harvesting relay scheduling library.
 *
 * All objects are opaque handles created and destroyed by this API. Every
 * function that can fail returns a relay_status; on failure the handle
 * outputs are left untouched and relay_last_error() describes the problem
 * (the message is thread-local and valid until the next failing call on the
 * same thread). Strings returned through char** outputs are heap-allocated
 * and must be released with relay_string_free().
 */

#ifndef EHRELAY_H
#define EHRELAY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum relay_status {
    RELAY_OK = 0,
    RELAY_ERR_INVALID_ARG = 1,   /* null pointer or malformed argument */
    RELAY_ERR_VALIDATION = 2,    /* bad scenario data or unusable channel */
    RELAY_ERR_NOT_APPLICABLE = 3, /* the policy's optimality gate failed */
    RELAY_ERR_NO_CONVERGENCE = 4, /* reference solver did not converge */
    RELAY_ERR_INTERNAL = 5
} relay_status;

typedef struct relay_scenario relay_scenario;
typedef struct relay_result relay_result;

/* Last error message of the current thread; never NULL. */
const char *relay_last_error(void);

void relay_string_free(char *s);

/* ---- scenarios ---- */

relay_status relay_scenario_load(const char *path, relay_scenario **out);
relay_status relay_scenario_parse(const char *json_text, relay_scenario **out);
relay_status relay_scenario_save(const relay_scenario *scenario, const char *path);
/* Canonical JSON text of the scenario. */
relay_status relay_scenario_to_json(const relay_scenario *scenario, char **out);
const char *relay_scenario_name(const relay_scenario *scenario);
void relay_scenario_free(relay_scenario *scenario);

/*
 * Deterministic Poisson scenario batch: integer-mJ harvests with the given
 * mean at the given instants. Writes a malloc'd array of `count` scenario
 * handles; release with relay_scenario_array_free.
 */
relay_status relay_generate(uint64_t seed, size_t count, double mean_mj,
                            const double *instants, size_t instant_count, double deadline,
                            relay_scenario ***out_array);
void relay_scenario_array_free(relay_scenario **array, size_t count);

/* ---- allocation ---- */

/*
 * Run a policy or solver mode by name: "greedy", "total-subopt", "disjoint",
 * "one-way", "two-way", "solve-no-et", "solve-one-way", "solve-two-way".
 * RELAY_ERR_NOT_APPLICABLE means the gated policy declined the scenario;
 * relay_last_error() then carries the failed condition.
 */
relay_status relay_alloc(const relay_scenario *scenario, const char *policy,
                         relay_result **out);

size_t relay_result_epoch_count(const relay_result *result);
double relay_result_throughput(const relay_result *result);
/* Copies epoch_count() powers (mW) into the caller's arrays; either may be NULL. */
relay_status relay_result_powers(const relay_result *result, double *p1, double *p2);
/* Copies epoch_count() per-instant transfers (scaled mJ); either may be NULL. */
relay_status relay_result_transfers(const relay_result *result, double *d1, double *d2);
relay_status relay_result_to_json(const relay_result *result, char **out);
relay_status relay_result_save(const relay_result *result, const char *path);
void relay_result_free(relay_result *result);

/* ---- reporting ---- */

/* CSV of cumulative harvested/consumed curves for a result on its scenario. */
relay_status relay_staircase_csv(const relay_scenario *scenario, const relay_result *result,
                                 char **out);

/* Comparison table over scenarios; format is "md", "csv" or "json". */
relay_status relay_compare(const relay_scenario *const *scenarios, size_t count,
                           const char *format, char **out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EHRELAY_H */
