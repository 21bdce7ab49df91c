/* Copyright 2026 The nomafl Authors
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

/* C interface to the nomafl solver and experiment harness.
 *
 * All handles are opaque and owned by the caller once returned; release them
 * with the matching *_free function (NULL is accepted). Functions returning
 * nomafl_status leave a description of the last failure, per thread, in
 * nomafl_last_error(). Output parameters are untouched on failure.
 */

#ifndef NOMAFL_NOMAFL_H_
#define NOMAFL_NOMAFL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define NOMAFL_API __attribute__((visibility("default")))
#else
#define NOMAFL_API
#endif

typedef enum nomafl_status {
  NOMAFL_OK = 0,
  NOMAFL_ERR_INVALID_ARGUMENT = 1,
  NOMAFL_ERR_CONFIG = 2,
  NOMAFL_ERR_IO = 3,
  NOMAFL_ERR_INFEASIBLE = 4,
  NOMAFL_ERR_UNREACHABLE = 5,
  NOMAFL_ERR_INTERNAL = 6
} nomafl_status;

typedef struct nomafl_experiment nomafl_experiment;
typedef struct nomafl_devices nomafl_devices;
typedef struct nomafl_results nomafl_results;

/* One result row. String pointers stay valid until the owning results
 * handle is freed. seed is meaningless when is_summary is non-zero. */
typedef struct nomafl_row {
  int is_summary;
  uint64_t seed;
  const char* sweep_variable;
  double sweep_value;
  const char* algorithm;
  const char* pairing;
  double alpha, beta, gamma;
  double energy_j;
  double time_s;
  double accuracy;
  double cost;
  double objective;
  const char* status;
  int iterations;
  const char* resolutions;
  int flagged;
} nomafl_row;

NOMAFL_API const char* nomafl_version(void);
NOMAFL_API const char* nomafl_last_error(void);
NOMAFL_API const char* nomafl_status_name(nomafl_status status);

/* path NULL or "" yields the defaults. */
NOMAFL_API nomafl_status nomafl_experiment_load(const char* path,
                                                nomafl_experiment** out);
NOMAFL_API nomafl_status nomafl_experiment_parse(const char* text,
                                                 nomafl_experiment** out);
/* Same keys as the config file. The spec is re-validated after the change;
 * on failure it is left as it was. */
NOMAFL_API nomafl_status nomafl_experiment_set(nomafl_experiment* exp,
                                               const char* key,
                                               const char* value);
/* Replays `devices` for every seed; NULL returns to generated topologies. */
NOMAFL_API nomafl_status nomafl_experiment_set_devices(
    nomafl_experiment* exp, const nomafl_devices* devices);
/* Copy of the configured output path ("-" is stdout). */
NOMAFL_API const char* nomafl_experiment_output(const nomafl_experiment* exp);
/* "csv" or "json". */
NOMAFL_API const char* nomafl_experiment_format(const nomafl_experiment* exp);
NOMAFL_API void nomafl_experiment_free(nomafl_experiment* exp);

NOMAFL_API nomafl_status nomafl_devices_generate(const nomafl_experiment* exp,
                                                 uint64_t seed,
                                                 nomafl_devices** out);
NOMAFL_API nomafl_status nomafl_devices_load(const char* path,
                                             nomafl_devices** out);
/* path "-" writes to stdout. */
NOMAFL_API nomafl_status nomafl_devices_save(const nomafl_devices* devices,
                                             const char* path);
NOMAFL_API size_t nomafl_devices_count(const nomafl_devices* devices);
NOMAFL_API void nomafl_devices_free(nomafl_devices* devices);

/* Runs every configured combination. Per-run failures become flagged rows;
 * only an invalid spec or an internal fault returns an error. */
NOMAFL_API nomafl_status nomafl_run(const nomafl_experiment* exp,
                                    nomafl_results** out);
NOMAFL_API size_t nomafl_results_count(const nomafl_results* results);
NOMAFL_API size_t nomafl_results_flagged(const nomafl_results* results);
NOMAFL_API nomafl_status nomafl_results_row(const nomafl_results* results,
                                            size_t index, nomafl_row* out);
/* format is "csv" or "json"; path "-" writes to stdout. */
NOMAFL_API nomafl_status nomafl_results_write(const nomafl_results* results,
                                              const char* path,
                                              const char* format);
NOMAFL_API void nomafl_results_free(nomafl_results* results);

#ifdef __cplusplus
}
#endif

#endif /* NOMAFL_NOMAFL_H_ */
