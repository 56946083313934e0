/*
Copyright 2026 The vtimbre Authors. All rights reserved.

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
/* C interface to the vtimbre library.
 *
 * Every fallible call returns a vt_status; on failure the message is kept
 * per thread and read back with vt_last_error(). Objects are opaque and
 * released with the matching *_free call (NULL is accepted). Strings
 * returned through char** are heap-allocated and released with
 * vt_string_free(). Structured results (reports, logs, weights) are JSON.
 *
 * Score semantics: 0 means utterance A is stronger in the descriptor,
 * 1 means B. Manifest labels are "A" and "B".
 */

#ifndef VTIMBRE_VTIMBRE_H_
#define VTIMBRE_VTIMBRE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VT_API __declspec(dllexport)
#else
#define VT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vt_status {
  VT_OK = 0,
  VT_ERR_INVALID_ARGUMENT = 1,
  VT_ERR_IO = 2,
  VT_ERR_UNSUPPORTED_FORMAT = 3,
  VT_ERR_EMPTY_AUDIO = 4,
  VT_ERR_TOO_SHORT = 5,
  VT_ERR_SILENT_UTTERANCE = 6,
  VT_ERR_MISSING_FEATURE = 7,
  VT_ERR_DEGENERATE = 8,
  VT_ERR_DIMENSION_MISMATCH = 9,
  VT_ERR_COVERAGE = 10,
  VT_ERR_SINGLE_CLASS = 11,
  VT_ERR_INTERNAL = 12
} vt_status;

typedef struct vt_audio vt_audio;
typedef struct vt_settings vt_settings;
typedef struct vt_features vt_features;
typedef struct vt_manifest vt_manifest;
typedef struct vt_model vt_model;

VT_API const char* vt_version(void);
/* Upper-case token such as "SILENT_UTTERANCE"; "OK" for VT_OK. */
VT_API const char* vt_status_name(vt_status status);
/* Message of the last failed call on this thread, "" if none. */
VT_API const char* vt_last_error(void);
VT_API void vt_string_free(char* s);

/* ---- audio ---- */
/* Decodes a WAV file and resamples it to 16 kHz. */
VT_API vt_status vt_audio_load(const char* path, vt_audio** out);
VT_API vt_status vt_audio_from_samples(const double* samples, size_t count, int sample_rate, vt_audio** out);
/* spec_json: {"kind": "pulse_train", "f0": 100, "duration": 1.0, ...} */
VT_API vt_status vt_audio_synth(const char* spec_json, vt_audio** out);
/* 16-bit PCM mono. */
VT_API vt_status vt_audio_save_wav16(const vt_audio* audio, const char* path);
VT_API size_t vt_audio_length(const vt_audio* audio);
VT_API int vt_audio_sample_rate(const vt_audio* audio);
VT_API const double* vt_audio_samples(const vt_audio* audio);
VT_API void vt_audio_free(vt_audio* audio);

/* ---- settings ---- */
/* config_json may be NULL or "" for the defaults. Unknown keys fail. */
VT_API vt_status vt_settings_create(const char* config_json, vt_settings** out);
VT_API vt_status vt_settings_json(const vt_settings* settings, char** out_json);
VT_API void vt_settings_free(vt_settings* settings);

/* ---- features ---- */
/* kind: "acoustic", "mfcc" or "lfc". Writes up to `capacity` values; *dim
 * always receives the full dimension. settings may be NULL. */
VT_API vt_status vt_extract(const vt_audio* audio, const char* kind, const vt_settings* settings, double* values,
                            size_t capacity, size_t* dim, size_t* voiced_frames);
/* Batch extraction on `jobs` threads (0 = all cores). Rows are sorted by
 * id. *skip_jsonl lists files skipped as silent or unmeasurable, one JSON
 * object per line; pass NULL to discard it. */
VT_API vt_status vt_extract_files(const char* const* paths, size_t count, const char* kind,
                                  const vt_settings* settings, size_t jobs, vt_features** out, char** skip_jsonl);
/* CSV unless the path ends in .jsonl or .json. */
VT_API vt_status vt_features_load(const char* path, vt_features** out);
VT_API vt_status vt_features_save(const vt_features* features, const char* path);
VT_API size_t vt_features_rows(const vt_features* features);
VT_API size_t vt_features_dim(const vt_features* features);
VT_API const char* vt_features_kind(const vt_features* features);
/* Copies the row for `id` (exact id or file stem). */
VT_API vt_status vt_features_row(const vt_features* features, const char* id, double* values, size_t capacity);
VT_API void vt_features_free(vt_features* features);

/* ---- manifest ---- */
/* JSON lines: {"utt_a", "utt_b", "descriptor", "label": "A"|"B",
 * "split": "train"|"test"}. */
VT_API vt_status vt_manifest_load(const char* path, vt_manifest** out);
/* Fails on descriptors outside the settings' vocabulary; *warnings_json is
 * a JSON array of strings (e.g. speakers shared across splits). */
VT_API vt_status vt_manifest_check(const vt_manifest* manifest, const vt_settings* settings, char** warnings_json);
/* split NULL counts every record. */
VT_API size_t vt_manifest_size(const vt_manifest* manifest, const char* split);
VT_API void vt_manifest_free(vt_manifest* manifest);

/* ---- model ---- */
/* Trains on the manifest's "train" split. *log_json holds one entry per
 * epoch; pass NULL to discard it. */
VT_API vt_status vt_train(const vt_manifest* manifest, const vt_features* features, const vt_settings* settings,
                          uint64_t seed, vt_model** out, char** log_json);
VT_API vt_status vt_model_load(const char* path, vt_model** out);
VT_API vt_status vt_model_save(const vt_model* model, const char* path);
VT_API vt_status vt_model_score(const vt_model* model, const double* a, const double* b, size_t dim,
                                const char* descriptor, double* score);
/* {"weights": [{"feature": name, "weight": gain}, ...]} in feature order. */
VT_API vt_status vt_model_weights(const vt_model* model, char** weights_json);
VT_API void vt_model_free(vt_model* model);

/* ---- evaluation ---- */
/* Scores the given split ("test", "train" or NULL for all) and returns the
 * accuracy / EER report as JSON. */
VT_API vt_status vt_evaluate(const vt_model* model, const vt_manifest* manifest, const vt_features* features,
                             const char* split, const vt_settings* settings, char** report_json);
/* Analytical cost of extraction for `kind` and of one classifier pass.
 * model may be NULL (default classifier shape). */
VT_API vt_status vt_cost_report(const char* kind, const vt_model* model, const vt_settings* settings,
                                char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* VTIMBRE_VTIMBRE_H_ */
