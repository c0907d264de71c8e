/* Copyright 2026 The frida-doa Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the wideband direction-of-arrival library. Every entry
 * point returns a status code; richer diagnostics for the last failure on
 * the calling thread come from frida_last_error(). Handles are opaque and
 * freed with their matching *_free function. Strings returned through
 * char** out-parameters are heap-allocated; release them with
 * frida_string_free().
 */

#ifndef FRIDA_FRIDA_H_
#define FRIDA_FRIDA_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum frida_status {
  FRIDA_OK = 0,
  FRIDA_ERR_INVALID_ARGUMENT = 1, /* bad parameters or malformed config */
  FRIDA_ERR_NUMERICAL = 2,        /* numerics failed or a check did not pass */
  FRIDA_ERR_IO = 3,               /* file missing or malformed */
  FRIDA_ERR_NOMEM = 4,
  FRIDA_ERR_INTERNAL = 5
} frida_status;

typedef struct frida_array frida_array;       /* microphone geometry */
typedef struct frida_estimate frida_estimate; /* DOA estimation result */

const char* frida_version(void);
const char* frida_status_string(frida_status status);

/* Message for the most recent failure on this thread (empty string if none). */
const char* frida_last_error(void);

void frida_string_free(char* str);

/* ---- geometry ------------------------------------------------------- */

/* xy: interleaved [x0, y0, x1, y1, ...] in meters. */
frida_status frida_array_create(const double* xy, int32_t num_mics,
                                double speed_of_sound, frida_array** out);

/* Equilateral triangle, mics_per_edge mics per edge at offset fractions. */
frida_status frida_array_create_triangular(double edge_m, int32_t mics_per_edge,
                                           double speed_of_sound, frida_array** out);

/* JSON file: {"positions": [[x, y], ...], "speed_of_sound": 343.0}. */
frida_status frida_array_load(const char* path, frida_array** out);

int32_t frida_array_num_mics(const frida_array* array);
frida_status frida_array_position(const frida_array* array, int32_t index,
                                  double* x, double* y);
void frida_array_free(frida_array* array);

/* ---- estimation from raw samples ------------------------------------ */

/* samples: channel-major buffer, channel c at samples + c*num_samples.
 * options_json (nullable): {"algorithm": "frida"|"music"|"srp-phat",
 * "bands": 20, "fft_size": 256, "grid_resolution": 3600,
 * "solver": {...}, "seed": 0}.
 */
frida_status frida_estimate_doa(const frida_array* array, const double* samples,
                                int32_t num_channels, int64_t num_samples,
                                double sample_rate, int32_t num_sources,
                                const char* options_json, frida_estimate** out);

int32_t frida_estimate_num_sources(const frida_estimate* est);
int32_t frida_estimate_num_bands(const frida_estimate* est);
/* azimuths in radians, ascending; out must hold num_sources doubles. */
frida_status frida_estimate_azimuths(const frida_estimate* est, double* out);
/* per-band powers, row-major num_sources x num_bands. */
frida_status frida_estimate_powers(const frida_estimate* est, double* out);
double frida_estimate_residual(const frida_estimate* est);
frida_status frida_estimate_to_json(const frida_estimate* est, char** json_out);
void frida_estimate_free(frida_estimate* est);

/* ---- config-driven runs (shared with the CLI) ------------------------ */

/* Validates a config and fills in every default. */
frida_status frida_config_resolve(const char* config_json, char** effective_json_out);

/* Single estimation pass per configured estimator on synthetic input, or on
 * a WAV file when wav_path is non-NULL (channel count must match the
 * geometry). Returns a JSON report. */
frida_status frida_run_estimate(const char* config_json, const char* wav_path,
                                char** result_json_out);

/* Runs the configured sweep, writing CSV/JSON/effective-config files into
 * output_dir (falls back to the config's output.dir). Returns a JSON
 * summary. */
frida_status frida_run_benchmark(const char* config_json, const char* output_dir,
                                 char** summary_json_out);

/* Oracle self-checks. Returns FRIDA_OK when every check passes, otherwise
 * FRIDA_ERR_NUMERICAL; the JSON report is produced either way.
 * options_json (nullable): {"inject_bessel_fault": false}. */
frida_status frida_selftest(const char* options_json, char** report_json_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FRIDA_FRIDA_H_ */
