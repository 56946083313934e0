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
#include "vtimbre/config.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "vtimbre/error.hpp"

namespace vt {

using nlohmann::json;

namespace {

json parse_object(const std::string& text, const char* what) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return json::object();
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must be a JSON object");
  return j;
}

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorCode::kInvalidArgument, "unknown key '" + where + k + "'");
}

template <typename T>
void take(const json& j, const char* key, T& field, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "key '" + where + key + "' has the wrong type");
  }
}

const json& section(const json& j, const char* key, const std::string& where) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_object()) throw Error(ErrorCode::kInvalidArgument, "'" + where + key + "' must be an object");
  return j.at(key);
}

void apply_extraction(const json& j, ExtractionConfig& c) {
  const std::string w = "extraction.";
  only_keys(j, {"step", "window", "min_voiced_frames", "pitch", "formants", "cpp", "shr", "cepstral"}, w);
  take(j, "step", c.frames.step, w);
  take(j, "window", c.frames.window, w);
  take(j, "min_voiced_frames", c.min_voiced_frames, w);

  const json& p = section(j, "pitch", w);
  const std::string wp = w + "pitch.";
  only_keys(p, {"floor", "ceiling", "voicing_threshold", "silence_threshold", "octave_cost", "lag_oversampling"}, wp);
  take(p, "floor", c.pitch.floor, wp);
  take(p, "ceiling", c.pitch.ceiling, wp);
  take(p, "voicing_threshold", c.pitch.voicing_threshold, wp);
  take(p, "silence_threshold", c.pitch.silence_threshold, wp);
  take(p, "octave_cost", c.pitch.octave_cost, wp);
  take(p, "lag_oversampling", c.pitch.lag_oversampling, wp);

  const json& f = section(j, "formants", w);
  const std::string wf = w + "formants.";
  only_keys(f, {"max_formants", "ceiling", "pre_emphasis_from", "window", "max_bandwidth"}, wf);
  take(f, "max_formants", c.formants.max_formants, wf);
  take(f, "ceiling", c.formants.ceiling, wf);
  take(f, "pre_emphasis_from", c.formants.pre_emphasis_from, wf);
  take(f, "window", c.formants.window, wf);
  take(f, "max_bandwidth", c.formants.max_bandwidth, wf);

  const json& q = section(j, "cpp", w);
  const std::string wq = w + "cpp.";
  only_keys(q, {"quefrency_floor", "quefrency_ceiling", "trend_from", "trend_to", "quefrency_smoothing"}, wq);
  take(q, "quefrency_floor", c.cpp.quefrency_floor, wq);
  take(q, "quefrency_ceiling", c.cpp.quefrency_ceiling, wq);
  take(q, "trend_from", c.cpp.trend_from, wq);
  take(q, "trend_to", c.cpp.trend_to, wq);
  take(q, "quefrency_smoothing", c.cpp.quefrency_smoothing, wq);

  const json& s = section(j, "shr", w);
  const std::string ws = w + "shr.";
  only_keys(s, {"harmonic_count_max", "floor_db"}, ws);
  take(s, "harmonic_count_max", c.shr.harmonic_count_max, ws);
  take(s, "floor_db", c.shr.floor_db, ws);

  const json& m = section(j, "cepstral", w);
  const std::string wm = w + "cepstral.";
  only_keys(m, {"window", "hop", "filters", "low_hz", "high_hz", "log_floor"}, wm);
  take(m, "window", c.cepstral.window, wm);
  take(m, "hop", c.cepstral.hop, wm);
  take(m, "filters", c.cepstral.filters, wm);
  take(m, "low_hz", c.cepstral.low_hz, wm);
  take(m, "high_hz", c.cepstral.high_hz, wm);
  take(m, "log_floor", c.cepstral.log_floor, wm);
}

void validate_extraction(const ExtractionConfig& c) {
  if (!(c.frames.step > 0.0) || !(c.frames.window > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "frame step and window must be positive");
  if (c.min_voiced_frames == 0) throw Error(ErrorCode::kInvalidArgument, "min_voiced_frames must be at least 1");
  c.pitch.validate(kAnalysisRate);
  c.formants.validate();
  if (c.shr.harmonic_count_max < 2) throw Error(ErrorCode::kInvalidArgument, "shr.harmonic_count_max must be >= 2");
  if (!(c.cepstral.window > 0.0) || !(c.cepstral.hop > 0.0) || c.cepstral.filters < kCepstralDim ||
      !(c.cepstral.low_hz >= 0.0 && c.cepstral.low_hz < c.cepstral.high_hz) || !(c.cepstral.log_floor > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "invalid cepstral settings");
}

json extraction_to_json(const ExtractionConfig& c) {
  return {{"step", c.frames.step},
          {"window", c.frames.window},
          {"min_voiced_frames", c.min_voiced_frames},
          {"pitch",
           {{"floor", c.pitch.floor},
            {"ceiling", c.pitch.ceiling},
            {"voicing_threshold", c.pitch.voicing_threshold},
            {"silence_threshold", c.pitch.silence_threshold},
            {"octave_cost", c.pitch.octave_cost},
            {"lag_oversampling", c.pitch.lag_oversampling}}},
          {"formants",
           {{"max_formants", c.formants.max_formants},
            {"ceiling", c.formants.ceiling},
            {"pre_emphasis_from", c.formants.pre_emphasis_from},
            {"window", c.formants.window},
            {"max_bandwidth", c.formants.max_bandwidth}}},
          {"cpp",
           {{"quefrency_floor", c.cpp.quefrency_floor},
            {"quefrency_ceiling", c.cpp.quefrency_ceiling},
            {"trend_from", c.cpp.trend_from},
            {"trend_to", c.cpp.trend_to},
            {"quefrency_smoothing", c.cpp.quefrency_smoothing}}},
          {"shr", {{"harmonic_count_max", c.shr.harmonic_count_max}, {"floor_db", c.shr.floor_db}}},
          {"cepstral",
           {{"window", c.cepstral.window},
            {"hop", c.cepstral.hop},
            {"filters", c.cepstral.filters},
            {"low_hz", c.cepstral.low_hz},
            {"high_hz", c.cepstral.high_hz},
            {"log_floor", c.cepstral.log_floor}}}};
}

// NaN and infinities are not representable in JSON.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

Settings parse_settings(const std::string& json_text) {
  const json j = parse_object(json_text, "config");
  only_keys(j, {"extraction", "train", "eval"}, "");
  Settings s;
  apply_extraction(section(j, "extraction", ""), s.extraction);
  const json& t = section(j, "train", "");
  const std::string wt = "train.";
  only_keys(t, {"hidden", "dropout", "learning_rate", "batch_size", "epochs", "gain_decay", "z_clip", "descriptors"}, wt);
  take(t, "hidden", s.train.hidden, wt);
  take(t, "dropout", s.train.dropout, wt);
  take(t, "learning_rate", s.train.learning_rate, wt);
  take(t, "batch_size", s.train.batch_size, wt);
  take(t, "epochs", s.train.epochs, wt);
  take(t, "gain_decay", s.train.gain_decay, wt);
  take(t, "z_clip", s.train.z_clip, wt);
  take(t, "descriptors", s.train.descriptors, wt);
  const json& e = section(j, "eval", "");
  only_keys(e, {"threshold"}, "eval.");
  take(e, "threshold", s.threshold, "eval.");
  if (!(s.threshold >= 0.0 && s.threshold <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "eval.threshold must lie in [0, 1]");
  validate_extraction(s.extraction);
  s.train.validate();
  return s;
}

std::string settings_json(const Settings& s) {
  json j;
  j["extraction"] = extraction_to_json(s.extraction);
  j["train"] = {{"hidden", s.train.hidden},
                {"dropout", s.train.dropout},
                {"learning_rate", s.train.learning_rate},
                {"batch_size", s.train.batch_size},
                {"epochs", s.train.epochs},
                {"gain_decay", s.train.gain_decay},
                {"z_clip", s.train.z_clip},
                {"descriptors", s.train.descriptors.empty() ? default_descriptors() : s.train.descriptors}};
  j["eval"] = {{"threshold", s.threshold}};
  return j.dump(2);
}

SynthSpec parse_synth_spec(const std::string& json_text) {
  const json j = parse_object(json_text, "synth spec");
  only_keys(j, {"kind", "f0", "duration", "amplitude", "formants", "subharmonic_gain", "noise_gain",
                "source_rolloff", "seed", "sample_rate"},
            "");
  SynthSpec s;
  std::string kind = synth_kind_name(s.kind);
  take(j, "kind", kind, "");
  s.kind = parse_synth_kind(kind);
  take(j, "f0", s.f0, "");
  take(j, "duration", s.duration, "");
  take(j, "amplitude", s.amplitude, "");
  take(j, "subharmonic_gain", s.subharmonic_gain, "");
  take(j, "noise_gain", s.noise_gain, "");
  take(j, "source_rolloff", s.source_rolloff, "");
  take(j, "seed", s.seed, "");
  take(j, "sample_rate", s.sample_rate, "");
  if (j.contains("formants")) {
    std::vector<std::vector<double>> pairs;
    take(j, "formants", pairs, "");
    for (const auto& p : pairs) {
      if (p.size() != 2) throw Error(ErrorCode::kInvalidArgument, "each formant is [frequency, bandwidth]");
      s.formants.push_back({p[0], p[1]});
    }
  }
  return s;
}

std::string synth_spec_json(const SynthSpec& s) {
  json formants = json::array();
  for (const auto& f : s.formants) formants.push_back({f.frequency, f.bandwidth});
  json j = {{"kind", synth_kind_name(s.kind)},
            {"f0", s.f0},
            {"duration", s.duration},
            {"amplitude", s.amplitude},
            {"formants", formants},
            {"subharmonic_gain", s.subharmonic_gain},
            {"noise_gain", s.noise_gain},
            {"source_rolloff", s.source_rolloff},
            {"seed", s.seed},
            {"sample_rate", s.sample_rate}};
  return j.dump();
}

std::string training_log_json(const std::vector<EpochLog>& log) {
  json epochs = json::array();
  for (const auto& e : log) epochs.push_back({{"epoch", e.epoch}, {"loss", e.loss}, {"train_accuracy", e.accuracy}});
  return json{{"epochs", epochs}}.dump(2);
}

std::string eval_report_json(const EvalReport& r, double threshold) {
  json j;
  j["pairs"] = r.pairs;
  j["threshold"] = threshold;
  j["accuracy"] = r.accuracy;
  j["eer"] = r.eer ? json(*r.eer) : json(nullptr);
  j["eer_threshold"] = r.eer_threshold ? number_or_null(*r.eer_threshold) : json(nullptr);
  json per = json::array();
  for (const auto& d : r.descriptors)
    per.push_back({{"descriptor", d.descriptor},
                   {"pairs", d.pairs},
                   {"b_labels", d.b_labels},
                   {"accuracy", d.accuracy},
                   {"eer", d.eer ? json(*d.eer) : json(nullptr)}});
  j["descriptors"] = per;
  json curve = json::array();
  for (const auto& p : r.curve) curve.push_back({{"threshold", number_or_null(p.threshold)}, {"far", p.far}, {"frr", p.frr}});
  j["det_curve"] = curve;
  j["warnings"] = r.warnings;
  return j.dump(2);
}

std::string cost_report_json(const CostReport& r) {
  auto items = [](const std::vector<CostItem>& v) {
    json a = json::array();
    for (const auto& i : v) a.push_back({{"stage", i.stage}, {"flops", i.flops}, {"formula", i.formula}});
    return a;
  };
  json j = {{"feature_kind", r.feature_kind},
            {"extraction_params", r.extraction_params},
            {"extraction_flops_per_second", r.extraction_flops_per_second},
            {"dim_per_utterance", r.dim_per_utterance},
            {"extraction_items", items(r.extraction_items)},
            {"classifier_params", r.classifier_params},
            {"classifier_flops_per_pair", r.classifier_flops_per_pair},
            {"classifier_flops_per_param", r.classifier_params ? r.classifier_flops_per_pair / r.classifier_params : 0.0},
            {"classifier_items", items(r.classifier_items)},
            {"conventions", r.conventions}};
  return j.dump(2);
}

std::string weights_json(const std::vector<FeatureWeight>& weights) {
  json a = json::array();
  for (const auto& w : weights) a.push_back({{"feature", w.name}, {"weight", w.weight}});
  return json{{"weights", a}}.dump(2);
}

}  // namespace vt
