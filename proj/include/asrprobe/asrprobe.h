// Copyright 2026 The asrprobe Authors
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

#ifndef ASRPROBE_ASRPROBE_H_
#define ASRPROBE_ASRPROBE_H_

/* Noise-robustness measurement for layered speech recognizers.
 *
 * Every fallible call returns an asrp_status; on failure a message is
 * available from asrp_last_error() on the same thread until the next call.
 * Objects are opaque handles released with their *_free function. Strings
 * returned through char** out-parameters are owned by the caller and
 * released with asrp_string_free(). */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ASRP_API __declspec(dllexport)
#elif defined(ASRPROBE_BUILDING_LIBRARY)
#define ASRP_API __attribute__((visibility("default")))
#else
#define ASRP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum asrp_status {
  ASRP_OK = 0,
  ASRP_ERR_INVALID_INPUT = 1,
  ASRP_ERR_INVALID_PARAMETER = 2,
  ASRP_ERR_INFEASIBLE_DROP = 3,
  ASRP_ERR_LOAD = 4,
  ASRP_ERR_CONTRACT = 5,
  ASRP_ERR_UNDEFINED_WER = 6,
  ASRP_ERR_PARSE = 7,
  ASRP_ERR_IO = 8,
  ASRP_ERR_CONFIG = 9,
  ASRP_ERR_HASH_MISMATCH = 10,
  ASRP_ERR_MISSING_POINTS = 11,
  ASRP_ERR_NULL_ARGUMENT = 100,
  ASRP_ERR_INTERNAL = 101
} asrp_status;

typedef struct asrp_waveform asrp_waveform;
typedef struct asrp_model asrp_model;
typedef struct asrp_activations asrp_activations;

ASRP_API const char* asrp_version(void);
ASRP_API const char* asrp_status_name(asrp_status status);
/* Message of the last failure on this thread, "" when none. */
ASRP_API const char* asrp_last_error(void);
ASRP_API void asrp_string_free(char* s);

/* ---- Waveforms ---- */

ASRP_API asrp_status asrp_waveform_create(const double* samples, size_t num_samples, int sample_rate,
                                          const char* id, asrp_waveform** out);
/* Mono 16-bit PCM or 32-bit float WAV. `id` may be NULL (file stem is used). */
ASRP_API asrp_status asrp_waveform_load_wav(const char* path, const char* id, asrp_waveform** out);
ASRP_API asrp_status asrp_waveform_save_wav(const asrp_waveform* x, const char* path, int float32);
ASRP_API void asrp_waveform_free(asrp_waveform* x);
ASRP_API size_t asrp_waveform_length(const asrp_waveform* x);
ASRP_API int asrp_waveform_sample_rate(const asrp_waveform* x);
ASRP_API const double* asrp_waveform_samples(const asrp_waveform* x);
ASRP_API const char* asrp_waveform_id(const asrp_waveform* x);

/* ---- Perturbations (outputs are new waveforms with the input's id) ---- */

ASRP_API asrp_status asrp_perturb_white_noise(const asrp_waveform* x, double mix_prob, double sigma,
                                              uint64_t seed, asrp_waveform** out);
/* Output lasts 1/speed_factor of the input. */
ASRP_API asrp_status asrp_perturb_speed(const asrp_waveform* x, double speed_factor, asrp_waveform** out);
ASRP_API asrp_status asrp_perturb_chunk_drop(const asrp_waveform* x, size_t num_chunks, size_t chunk_len,
                                             uint64_t seed, asrp_waveform** out);
/* units: "factor", "percent" (value/100) or "inverse-percent" (100/value). */
ASRP_API asrp_status asrp_speed_factor_from(double value, const char* units, double* out);

/* ---- Models ---- */

/* "synthetic:<seed>[:<layers>:<width>]", a checkpoint directory, or a
 * checkpoint name resolved under $ASRPROBE_MODEL_CACHE. */
ASRP_API asrp_status asrp_model_load(const char* model_id, asrp_model** out);
ASRP_API void asrp_model_free(asrp_model* model);
ASRP_API int asrp_model_num_layers(const asrp_model* model);
ASRP_API int asrp_model_sample_rate(const asrp_model* model);
/* Runs one untimed inference; required before asrp_transcribe_timed. */
ASRP_API asrp_status asrp_model_warmup(asrp_model* model, const asrp_waveform* x);
ASRP_API asrp_status asrp_transcribe(asrp_model* model, const asrp_waveform* x, char** text_out);
ASRP_API asrp_status asrp_transcribe_timed(asrp_model* model, const asrp_waveform* x, char** text_out,
                                           double* seconds_out);
/* mode: "additive" or "multiplicative"; noise is injected at tap `layer`. */
ASRP_API asrp_status asrp_transcribe_injected(asrp_model* model, const asrp_waveform* x, const char* mode,
                                              int layer, double rho, uint64_t seed, char** text_out);
/* Captures every tap. `mode` NULL means a clean pass; otherwise the
 * injection is applied as in asrp_transcribe_injected. text_out may be NULL. */
ASRP_API asrp_status asrp_collect_activations(asrp_model* model, const asrp_waveform* x, const char* mode,
                                              int layer, double rho, uint64_t seed, asrp_activations** out,
                                              char** text_out);
ASRP_API size_t asrp_activations_num_taps(const asrp_activations* acts);
/* values are frame-major: values[t * channels + c]. Valid until freed. */
ASRP_API asrp_status asrp_activations_tap(const asrp_activations* acts, size_t tap, const double** values,
                                          size_t* frames, size_t* channels);
ASRP_API void asrp_activations_free(asrp_activations* acts);
/* Per-tap normalized L2 gap between clean and noisy (x + rho * g) passes.
 * Writes min(capacity, taps) values and the tap count. */
ASRP_API asrp_status asrp_divergence(asrp_model* model, const asrp_waveform* x, double rho, uint64_t seed,
                                     double* dist_out, size_t capacity, size_t* num_taps_out);

/* ---- Metrics ---- */

typedef struct asrp_wer_result {
  size_t substitutions;
  size_t deletions;
  size_t insertions;
  size_t ref_words;
  size_t hyp_words;
  double wer;
} asrp_wer_result;

ASRP_API asrp_status asrp_wer(const char* reference, const char* hypothesis, asrp_wer_result* out);
ASRP_API asrp_status asrp_normalize_text(const char* text, char** out);

/* ---- Experiments ---- */

/* Values that replace config-file fields. Zero/NULL members leave the file's
 * value in place. */
typedef struct asrp_run_overrides {
  int has_seed;
  uint64_t seed;
  const char* output_dir;
  int workers;
} asrp_run_overrides;

typedef void (*asrp_log_fn)(const char* message, void* user);

/* resume == 0: the output directory must not hold results yet.
 * resume != 0: runs only the points missing under the same config hash. */
ASRP_API asrp_status asrp_run_experiment(const char* config_path, const asrp_run_overrides* overrides,
                                         int resume, asrp_log_fn log, void* user, size_t* points_run,
                                         size_t* points_already_done);
/* Newline-separated labels of the points a resume would run. */
ASRP_API asrp_status asrp_plan_resume(const char* config_path, const asrp_run_overrides* overrides,
                                      char** labels_out, size_t* count_out);
ASRP_API asrp_status asrp_config_hash(const char* config_path, const asrp_run_overrides* overrides,
                                      char** hash_out);
/* Draws `count` entries of a manifest-format listing without replacement. */
ASRP_API asrp_status asrp_subsample(const char* listing_path, size_t count, uint64_t seed,
                                    const char* out_path, size_t* written_out);

/* ---- Reports ---- */

typedef struct asrp_figure_request {
  const char* kind; /* wer-vs-param | wer-vs-layer | divergence-vs-layer */
  const char* x_field;      /* NULL or "" for the kind default */
  const char* series_field; /* NULL or "" for the kind default */
  const char* const* csv_paths;
  size_t num_csv_paths;
  const char* output_path; /* stem; .png, .svg and .tsv are written */
  const char* const* filters; /* "column=value" */
  size_t num_filters;
  const char* title;
  int log_x;
} asrp_figure_request;

/* Any of the path outputs may be NULL. */
ASRP_API asrp_status asrp_emit_figure(const asrp_figure_request* request, char** png_out, char** svg_out,
                                      char** data_out);
ASRP_API asrp_status asrp_export_summary(const char* const* csv_paths, size_t num_csv_paths, char** table_out);

#ifdef __cplusplus
}
#endif

#endif /* ASRPROBE_ASRPROBE_H_ */
