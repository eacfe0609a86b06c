/* Copyright 2026 The lenctl Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

/*
 * C interface to liblenctl.
 *
 * Every function returns a lenctl_status. On failure the calling thread's
 * lenctl_last_error() holds a message. Strings returned through char** are
 * owned by the caller and released with lenctl_string_free(). Handles are
 * opaque and not shared between threads without external locking, except
 * that a const handle may be read from several threads at once.
 */

#ifndef LENCTL_LENCTL_H_
#define LENCTL_LENCTL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(LENCTL_BUILDING_LIBRARY)
#define LENCTL_API __declspec(dllexport)
#else
#define LENCTL_API __declspec(dllimport)
#endif
#else
#define LENCTL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lenctl_status {
  LENCTL_OK = 0,
  LENCTL_ERR_INVALID_ARGUMENT = 1,
  LENCTL_ERR_CONFIG = 2,
  LENCTL_ERR_PARSE = 3,
  LENCTL_ERR_BOUNDARY = 4,
  LENCTL_ERR_MALFORMED_TOKEN = 5,
  LENCTL_ERR_EMPTY_REFERENCE = 6,
  LENCTL_ERR_NO_DATA = 7,
  LENCTL_ERR_PROTOCOL = 8,
  LENCTL_ERR_IO = 9,
  LENCTL_ERR_JUDGE_UNAVAILABLE = 10,
  LENCTL_ERR_SCORING_PARSE = 11,
  LENCTL_ERR_VALIDATION_FAILED = 12,
  LENCTL_ERR_INTERNAL = 13
} lenctl_status;

typedef struct lenctl_config lenctl_config;
typedef struct lenctl_ngram lenctl_ngram;

LENCTL_API const char* lenctl_version(void);
LENCTL_API const char* lenctl_status_name(lenctl_status status);
/* Message for the last failed call on this thread; "" after a success. */
LENCTL_API const char* lenctl_last_error(void);
/* 1-based input line of the last failure, 0 when not line-specific. */
LENCTL_API size_t lenctl_last_error_line(void);
LENCTL_API void lenctl_string_free(char* s);

/* ---- configuration ---------------------------------------------------- */

LENCTL_API lenctl_status lenctl_config_create(lenctl_config** out);
LENCTL_API void lenctl_config_destroy(lenctl_config* config);
/* Overlays a JSON document (same schema as the config file). */
LENCTL_API lenctl_status lenctl_config_merge_json(lenctl_config* config, const char* json);
LENCTL_API lenctl_status lenctl_config_merge_file(lenctl_config* config, const char* path);
LENCTL_API lenctl_status lenctl_config_to_json(const lenctl_config* config, char** out);
LENCTL_API lenctl_status lenctl_config_hash(const lenctl_config* config, char** out);

/* ---- text -------------------------------------------------------------- */

/* unit: "word", "sentence" or "character". */
LENCTL_API lenctl_status lenctl_count_units(const char* text, size_t len, const char* unit,
                                            size_t* out);
LENCTL_API lenctl_status lenctl_render_token(const lenctl_config* config, const char* unit,
                                             uint64_t major, uint64_t minor, char** out);
LENCTL_API lenctl_status lenctl_strip_tokens(const lenctl_config* config, const char* text,
                                             size_t len, char** out);
/* *ok is 1 when the text satisfies the protocol; verdict_json may be NULL. */
LENCTL_API lenctl_status lenctl_validate_text(const lenctl_config* config, const char* text,
                                              size_t len, int* ok, char** verdict_json);
LENCTL_API lenctl_status lenctl_inference_context(const lenctl_config* config,
                                                  const char* source, const char* task,
                                                  int64_t target, const char* framework,
                                                  char** out);
/* variant: "rouge1", "rouge2" or "rougeL". */
LENCTL_API lenctl_status lenctl_rouge_f1(const char* candidate, const char* reference,
                                         const char* variant, int stem, double* out);

/* ---- files ------------------------------------------------------------- */
/*
 * Outputs are written atomically. summary_json, when not NULL, receives a
 * short JSON summary of the run. Nullable path arguments are marked.
 */

/* manifest: nullable, defaults to output + ".manifest.json". */
LENCTL_API lenctl_status lenctl_augment_file(const lenctl_config* config, const char* input,
                                             const char* output, const char* manifest,
                                             char** summary_json);
/* Returns LENCTL_ERR_VALIDATION_FAILED when any record violates the protocol;
 * the report is still produced. */
LENCTL_API lenctl_status lenctl_validate_file(const lenctl_config* config, const char* input,
                                              char** report_json);
/* model: nullable, required by the n-gram simulator. */
LENCTL_API lenctl_status lenctl_simulate_file(const lenctl_config* config, const char* input,
                                              const char* output, const char* model,
                                              char** summary_json);
/* csv: nullable per-target table. */
LENCTL_API lenctl_status lenctl_evaluate_file(const lenctl_config* config, const char* input,
                                              const char* output, const char* csv,
                                              char** summary_json);
/* Delta x residual_max grid over the rule follower. csv: nullable.
 * summary_json carries the grid and a printable table. */
LENCTL_API lenctl_status lenctl_sweep_grid_file(const lenctl_config* config, const char* input,
                                                const char* output, const char* csv,
                                                char** summary_json);
/* frameworks: comma-separated list, e.g. "hansel,gretel". model: nullable,
 * without one the n-gram simulator trains per framework on the input.
 * csv, dat: nullable. */
LENCTL_API lenctl_status lenctl_sweep_targets_file(const lenctl_config* config,
                                                   const char* input, const char* output,
                                                   const char* frameworks, const char* model,
                                                   const char* csv, const char* dat,
                                                   char** summary_json);
/* output: nullable, nothing is written without it. */
LENCTL_API lenctl_status lenctl_stats_file(const lenctl_config* config, const char* input,
                                           const char* output, char** summary_json);
LENCTL_API lenctl_status lenctl_train_file(const lenctl_config* config, const char* input,
                                           const char* output, char** summary_json);
/* Returns LENCTL_ERR_VALIDATION_FAILED when some records could not be
 * scored; their lines carry the error. */
LENCTL_API lenctl_status lenctl_judge_file(const lenctl_config* config, const char* input,
                                           const char* output, char** summary_json);

/* Synthetic template corpus: `size` examples, reference lengths mostly in
 * [10, 40] with a wide tail in [3, 150]. task: "summarization" or "dialogue". */
LENCTL_API lenctl_status lenctl_synth_file(const char* output, size_t size, uint64_t seed,
                                           const char* task);

/* ---- n-gram model ------------------------------------------------------ */

LENCTL_API lenctl_status lenctl_ngram_train_file(const lenctl_config* config, const char* input,
                                                 lenctl_ngram** out);
LENCTL_API lenctl_status lenctl_ngram_load(const char* path, lenctl_ngram** out);
LENCTL_API lenctl_status lenctl_ngram_save(const lenctl_ngram* model, const char* path);
LENCTL_API lenctl_status lenctl_ngram_generate(const lenctl_ngram* model,
                                               const lenctl_config* config, const char* context,
                                               int assisted, uint64_t seed, char** out,
                                               int* hit_cap);
LENCTL_API void lenctl_ngram_destroy(lenctl_ngram* model);

#ifdef __cplusplus
}
#endif

#endif /* LENCTL_LENCTL_H_ */
