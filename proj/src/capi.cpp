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
#include "vtimbre/vtimbre.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "vtimbre/audio.hpp"
#include "vtimbre/config.hpp"
#include "vtimbre/error.hpp"
#include "vtimbre/io.hpp"
#include "vtimbre/pipeline.hpp"

struct vt_audio {
  vt::AudioBuffer buffer;
};
struct vt_settings {
  vt::Settings settings;
};
struct vt_features {
  vt::FeatureTable table;
};
struct vt_manifest {
  std::vector<vt::ManifestRecord> records;
};
struct vt_model {
  vt::DiffNetModel model;
};

namespace {

thread_local std::string last_error;

vt_status fail(vt_status status, const std::string& message) {
  last_error = message;
  return status;
}

template <typename F>
vt_status guard(F&& body) {
  try {
    body();
    last_error.clear();
    return VT_OK;
  } catch (const vt::Error& e) {
    return fail(static_cast<vt_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(VT_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(VT_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(VT_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw vt::Error(vt::ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const vt::Settings& settings_or_default(const vt_settings* s) {
  static const vt::Settings defaults;
  return s ? s->settings : defaults;
}

std::vector<vt::ManifestRecord> records_for(const vt_manifest* m, const char* split) {
  if (split == nullptr) return m->records;
  const std::string name = split;
  if (name != "train" && name != "test")
    throw vt::Error(vt::ErrorCode::kInvalidArgument, "split must be \"train\" or \"test\"");
  return vt::select_split(m->records, name);
}

}  // namespace

extern "C" {

const char* vt_version(void) { return "1.0.0"; }

const char* vt_status_name(vt_status status) {
  if (status == VT_OK) return "OK";
  if (status < VT_ERR_INVALID_ARGUMENT || status > VT_ERR_INTERNAL) return "UNKNOWN";
  return vt::error_code_name(static_cast<vt::ErrorCode>(status));
}

const char* vt_last_error(void) { return last_error.c_str(); }

void vt_string_free(char* s) { std::free(s); }

vt_status vt_audio_load(const char* path, vt_audio** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new vt_audio{vt::load_audio(path)};
  });
}

vt_status vt_audio_from_samples(const double* samples, size_t count, int sample_rate, vt_audio** out) {
  return guard([&] {
    require(out, "out");
    if (count > 0) require(samples, "samples");
    *out = new vt_audio{vt::AudioBuffer(std::vector<double>(samples, samples + count), sample_rate)};
  });
}

vt_status vt_audio_synth(const char* spec_json, vt_audio** out) {
  return guard([&] {
    require(spec_json, "spec_json");
    require(out, "out");
    *out = new vt_audio{vt::synth(vt::parse_synth_spec(spec_json))};
  });
}

vt_status vt_audio_save_wav16(const vt_audio* audio, const char* path) {
  return guard([&] {
    require(audio, "audio");
    require(path, "path");
    vt::write_wav16(audio->buffer, path);
  });
}

size_t vt_audio_length(const vt_audio* audio) { return audio ? audio->buffer.size() : 0; }
int vt_audio_sample_rate(const vt_audio* audio) { return audio ? audio->buffer.sample_rate() : 0; }
const double* vt_audio_samples(const vt_audio* audio) { return audio ? audio->buffer.samples().data() : nullptr; }
void vt_audio_free(vt_audio* audio) { delete audio; }

vt_status vt_settings_create(const char* config_json, vt_settings** out) {
  return guard([&] {
    require(out, "out");
    *out = new vt_settings{vt::parse_settings(config_json ? config_json : "")};
  });
}

vt_status vt_settings_json(const vt_settings* settings, char** out_json) {
  return guard([&] {
    require(out_json, "out_json");
    *out_json = dup_string(vt::settings_json(settings_or_default(settings)));
  });
}

void vt_settings_free(vt_settings* settings) { delete settings; }

vt_status vt_extract(const vt_audio* audio, const char* kind, const vt_settings* settings, double* values,
                     size_t capacity, size_t* dim, size_t* voiced_frames) {
  return guard([&] {
    require(audio, "audio");
    require(kind, "kind");
    const vt::FeatureVector row =
        vt::extract_features(audio->buffer, vt::parse_feature_kind(kind), settings_or_default(settings).extraction);
    if (dim) *dim = row.values.size();
    if (voiced_frames) *voiced_frames = row.voiced_frames;
    if (values) std::copy_n(row.values.begin(), std::min(capacity, row.values.size()), values);
  });
}

vt_status vt_extract_files(const char* const* paths, size_t count, const char* kind, const vt_settings* settings,
                           size_t jobs, vt_features** out, char** skip_jsonl) {
  return guard([&] {
    require(kind, "kind");
    require(out, "out");
    if (count > 0) require(paths, "paths");
    std::vector<std::string> list;
    for (size_t i = 0; i < count; ++i) {
      require(paths[i], "paths[i]");
      list.emplace_back(paths[i]);
    }
    vt::ExtractionResult r =
        vt::extract_files(list, vt::parse_feature_kind(kind), settings_or_default(settings).extraction, jobs);
    char* skips = skip_jsonl ? dup_string(vt::skip_list_jsonl(r.skipped)) : nullptr;
    *out = new vt_features{std::move(r.table)};
    if (skip_jsonl) *skip_jsonl = skips;
  });
}

vt_status vt_features_load(const char* path, vt_features** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new vt_features{vt::read_feature_table(path)};
  });
}

vt_status vt_features_save(const vt_features* features, const char* path) {
  return guard([&] {
    require(features, "features");
    require(path, "path");
    vt::write_feature_table(features->table, path);
  });
}

size_t vt_features_rows(const vt_features* features) { return features ? features->table.rows.size() : 0; }
size_t vt_features_dim(const vt_features* features) { return features ? features->table.names.size() : 0; }
const char* vt_features_kind(const vt_features* features) { return features ? features->table.kind.c_str() : ""; }

vt_status vt_features_row(const vt_features* features, const char* id, double* values, size_t capacity) {
  return guard([&] {
    require(features, "features");
    require(id, "id");
    const vt::FeatureVector* row = features->table.find(id);
    if (row == nullptr) throw vt::Error(vt::ErrorCode::kCoverage, std::string("no features for '") + id + "'");
    if (values) std::copy_n(row->values.begin(), std::min(capacity, row->values.size()), values);
  });
}

void vt_features_free(vt_features* features) { delete features; }

vt_status vt_manifest_load(const char* path, vt_manifest** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new vt_manifest{vt::read_manifest(path)};
  });
}

vt_status vt_manifest_check(const vt_manifest* manifest, const vt_settings* settings, char** warnings_json) {
  return guard([&] {
    require(manifest, "manifest");
    const auto& s = settings_or_default(settings);
    const auto& vocabulary = s.train.descriptors.empty() ? vt::default_descriptors() : s.train.descriptors;
    const auto warnings = vt::check_manifest(manifest->records, vocabulary);
    if (warnings_json) *warnings_json = dup_string(nlohmann::json(warnings).dump());
  });
}

size_t vt_manifest_size(const vt_manifest* manifest, const char* split) {
  if (manifest == nullptr) return 0;
  if (split == nullptr) return manifest->records.size();
  return vt::select_split(manifest->records, split).size();
}

void vt_manifest_free(vt_manifest* manifest) { delete manifest; }

vt_status vt_train(const vt_manifest* manifest, const vt_features* features, const vt_settings* settings,
                   uint64_t seed, vt_model** out, char** log_json) {
  return guard([&] {
    require(manifest, "manifest");
    require(features, "features");
    require(out, "out");
    vt::TrainConfig config = settings_or_default(settings).train;
    config.seed = seed;
    const auto train = vt::select_split(manifest->records, "train");
    if (train.empty()) throw vt::Error(vt::ErrorCode::kInvalidArgument, "manifest has no train split");
    vt::TrainResult r = vt::train_from_table(features->table, train, config);
    char* log = log_json ? dup_string(vt::training_log_json(r.log)) : nullptr;
    *out = new vt_model{std::move(r.model)};
    if (log_json) *log_json = log;
  });
}

vt_status vt_model_load(const char* path, vt_model** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new vt_model{vt::load_model(path)};
  });
}

vt_status vt_model_save(const vt_model* model, const char* path) {
  return guard([&] {
    require(model, "model");
    require(path, "path");
    vt::save_model(model->model, path);
  });
}

vt_status vt_model_score(const vt_model* model, const double* a, const double* b, size_t dim,
                         const char* descriptor, double* score) {
  return guard([&] {
    require(model, "model");
    require(a, "a");
    require(b, "b");
    require(descriptor, "descriptor");
    require(score, "score");
    if (dim != model->model.feature_dim())
      throw vt::Error(vt::ErrorCode::kDimensionMismatch, "embedding dimension " + std::to_string(dim) +
                                                             " does not match the model's " +
                                                             std::to_string(model->model.feature_dim()));
    *score = vt::score_pair(model->model, {a, dim}, {b, dim}, descriptor);
  });
}

vt_status vt_model_weights(const vt_model* model, char** weights_json) {
  return guard([&] {
    require(model, "model");
    require(weights_json, "weights_json");
    *weights_json = dup_string(vt::weights_json(vt::feature_importance(model->model)));
  });
}

void vt_model_free(vt_model* model) { delete model; }

vt_status vt_evaluate(const vt_model* model, const vt_manifest* manifest, const vt_features* features,
                      const char* split, const vt_settings* settings, char** report_json) {
  return guard([&] {
    require(model, "model");
    require(manifest, "manifest");
    require(features, "features");
    require(report_json, "report_json");
    const auto& s = settings_or_default(settings);
    const auto records = records_for(manifest, split);
    if (records.empty()) throw vt::Error(vt::ErrorCode::kInvalidArgument, "no pairs to evaluate");
    const auto scored = vt::score_records(model->model, features->table, records);
    nlohmann::json report = nlohmann::json::parse(vt::eval_report_json(vt::evaluate(scored, s.threshold), s.threshold));
    const auto& kind = model->model.feature_kind;
    if (kind == "acoustic" || kind == "mfcc" || kind == "lfc") {
      const auto cost = vt::cost_report(vt::parse_feature_kind(kind), s.extraction, vt::classifier_shape(model->model));
      report["cost"] = nlohmann::json::parse(vt::cost_report_json(cost));
    }
    *report_json = dup_string(report.dump(2));
  });
}

vt_status vt_cost_report(const char* kind, const vt_model* model, const vt_settings* settings, char** report_json) {
  return guard([&] {
    require(kind, "kind");
    require(report_json, "report_json");
    const auto k = vt::parse_feature_kind(kind);
    vt::ClassifierShape shape;
    shape.feature_dim = vt::feature_dim(k);
    if (model) {
      shape = vt::classifier_shape(model->model);
      if (shape.feature_dim != vt::feature_dim(k))
        throw vt::Error(vt::ErrorCode::kDimensionMismatch, std::string("model was trained on ") +
                                                               std::to_string(shape.feature_dim) +
                                                               "-dim features, not " + kind);
    }
    *report_json = dup_string(vt::cost_report_json(vt::cost_report(k, settings_or_default(settings).extraction, shape)));
  });
}

}  // extern "C"
