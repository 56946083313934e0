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
// vtimbre command-line tool. Talks to the library only through vtimbre.h.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vtimbre/vtimbre.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Carries a status out of a subcommand; main() turns it into the error line.
struct Failure {
  vt_status status;
  std::string message;
};

void check(vt_status s) {
  if (s != VT_OK) throw Failure{s, vt_last_error()};
}

[[noreturn]] void fail(vt_status s, const std::string& message) { throw Failure{s, message}; }

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Audio = std::unique_ptr<vt_audio, Deleter<vt_audio, vt_audio_free>>;
using Settings = std::unique_ptr<vt_settings, Deleter<vt_settings, vt_settings_free>>;
using Features = std::unique_ptr<vt_features, Deleter<vt_features, vt_features_free>>;
using Manifest = std::unique_ptr<vt_manifest, Deleter<vt_manifest, vt_manifest_free>>;
using Model = std::unique_ptr<vt_model, Deleter<vt_model, vt_model_free>>;

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  vt_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(VT_ERR_IO, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(VT_ERR_IO, "cannot write " + path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) fail(VT_ERR_IO, "write failed: " + path);
}

// --config takes a JSON file or inline JSON.
Settings load_settings(const std::string& config) {
  std::string text;
  if (!config.empty()) text = config.front() == '{' ? config : read_file(config);
  vt_settings* s = nullptr;
  check(vt_settings_create(text.c_str(), &s));
  return Settings(s);
}

bool is_wav(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

// Directories are scanned recursively for .wav files; @list.txt names one
// path (file or directory) per line; anything else is taken as a file.
void add_input(const std::string& path, std::vector<std::string>& out) {
  if (!fs::is_directory(path)) {
    out.push_back(path);
    return;
  }
  std::vector<std::string> found;
  for (const auto& e : fs::recursive_directory_iterator(path))
    if (e.is_regular_file() && is_wav(e.path())) found.push_back(e.path().string());
  std::sort(found.begin(), found.end());
  out.insert(out.end(), found.begin(), found.end());
}

std::vector<std::string> collect_inputs(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (!a.empty() && a.front() == '@') {
      std::istringstream lines(read_file(a.substr(1)));
      for (std::string line; std::getline(lines, line);) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (!line.empty() && line.front() != '#') add_input(line, out);
      }
    } else {
      add_input(a, out);
    }
  }
  if (out.empty()) fail(VT_ERR_INVALID_ARGUMENT, "no input files");
  return out;
}

std::string fmt_pct(const json& v) {
  if (v.is_null()) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", v.get<double>());
  return buf;
}

// ---- synth ----

struct SynthArgs {
  std::string kind = "pulse_train";
  double f0 = 100.0;
  double duration = 1.0;
  double amplitude = 0.5;
  std::vector<std::string> formants;
  double subharmonic_gain = 0.0;
  double noise_gain = 0.0;
  double rolloff = 0.9;
  uint64_t seed = 0;
  int rate = 16000;
  std::string out;
};

void run_synth(const SynthArgs& a) {
  json spec = {{"kind", a.kind},
               {"f0", a.f0},
               {"duration", a.duration},
               {"amplitude", a.amplitude},
               {"subharmonic_gain", a.subharmonic_gain},
               {"noise_gain", a.noise_gain},
               {"source_rolloff", a.rolloff},
               {"seed", a.seed},
               {"sample_rate", a.rate}};
  json formants = json::array();
  for (const auto& f : a.formants) {
    double freq = 0, bw = 0;
    char tail = 0;
    if (std::sscanf(f.c_str(), "%lf:%lf%c", &freq, &bw, &tail) != 2)
      fail(VT_ERR_INVALID_ARGUMENT, "formant '" + f + "' is not FREQ:BANDWIDTH");
    formants.push_back({freq, bw});
  }
  spec["formants"] = formants;
  vt_audio* audio = nullptr;
  check(vt_audio_synth(spec.dump().c_str(), &audio));
  Audio held(audio);
  check(vt_audio_save_wav16(audio, a.out.c_str()));
  std::printf("wrote %s (%zu samples at %d Hz)\n", a.out.c_str(), vt_audio_length(audio), vt_audio_sample_rate(audio));
}

// ---- extract ----

struct ExtractArgs {
  std::vector<std::string> inputs;
  std::string kind = "acoustic";
  std::string config;
  std::string out;
  std::string skip_list;
  size_t jobs = 0;
};

void run_extract(const ExtractArgs& a) {
  const auto paths = collect_inputs(a.inputs);
  std::vector<const char*> cpaths;
  for (const auto& p : paths) cpaths.push_back(p.c_str());
  Settings settings = load_settings(a.config);
  vt_features* f = nullptr;
  char* skipped = nullptr;
  const vt_status s = vt_extract_files(cpaths.data(), cpaths.size(), a.kind.c_str(), settings.get(), a.jobs, &f, &skipped);
  const std::string skip_text = take(skipped);
  const std::string skip_path = a.skip_list.empty() ? a.out + ".skipped.jsonl" : a.skip_list;
  if (!skip_text.empty() || s == VT_OK) write_file(skip_path, skip_text);
  check(s);
  Features features(f);
  check(vt_features_save(f, a.out.c_str()));
  size_t n_skipped = 0;
  std::istringstream lines(skip_text);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    ++n_skipped;
    const json j = json::parse(line);
    std::fprintf(stderr, "warning: skipped %s: %s: %s\n", j.value("path", "").c_str(), j.value("reason", "").c_str(),
                 j.value("message", "").c_str());
  }
  std::printf("extracted %zu of %zu files (%s, %zu dims) -> %s\n", vt_features_rows(f), paths.size(), vt_features_kind(f),
              vt_features_dim(f), a.out.c_str());
  if (n_skipped) std::printf("skipped %zu, listed in %s\n", n_skipped, skip_path.c_str());
}

// ---- train ----

struct TrainArgs {
  std::string manifest;
  std::string features;
  std::string config;
  std::string out;
  std::string log;
  uint64_t seed = 0;
};

Manifest load_manifest(const std::string& path, const vt_settings* settings) {
  vt_manifest* m = nullptr;
  check(vt_manifest_load(path.c_str(), &m));
  Manifest held(m);
  char* warnings = nullptr;
  check(vt_manifest_check(m, settings, &warnings));
  for (const auto& w : json::parse(take(warnings))) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
  return held;
}

Features load_features(const std::string& path) {
  vt_features* f = nullptr;
  check(vt_features_load(path.c_str(), &f));
  return Features(f);
}

Model load_model(const std::string& path) {
  vt_model* m = nullptr;
  check(vt_model_load(path.c_str(), &m));
  return Model(m);
}

void run_train(const TrainArgs& a) {
  Settings settings = load_settings(a.config);
  Manifest manifest = load_manifest(a.manifest, settings.get());
  Features features = load_features(a.features);
  vt_model* m = nullptr;
  char* log = nullptr;
  check(vt_train(manifest.get(), features.get(), settings.get(), a.seed, &m, &log));
  Model model(m);
  const std::string log_text = take(log);
  check(vt_model_save(m, a.out.c_str()));
  const std::string log_path = a.log.empty() ? a.out + ".log.json" : a.log;
  write_file(log_path, log_text);
  const json epochs = json::parse(log_text).at("epochs");
  std::printf("trained on %zu pairs, seed %llu\n", vt_manifest_size(manifest.get(), "train"),
              static_cast<unsigned long long>(a.seed));
  if (!epochs.empty()) {
    const auto& last = epochs.back();
    std::printf("epoch %d: loss %.4f, train accuracy %.2f%%\n", last.at("epoch").get<int>(), last.at("loss").get<double>(),
                100.0 * last.at("train_accuracy").get<double>());
  }
  std::printf("checkpoint %s, log %s\n", a.out.c_str(), log_path.c_str());
}

// ---- eval ----

struct EvalArgs {
  std::string manifest;
  std::string features;
  std::string model;
  std::string config;
  std::string split = "test";
  std::string out;
};

void run_eval(const EvalArgs& a) {
  Settings settings = load_settings(a.config);
  Manifest manifest = load_manifest(a.manifest, settings.get());
  Features features = load_features(a.features);
  Model model = load_model(a.model);
  char* report = nullptr;
  const char* split = a.split == "all" ? nullptr : a.split.c_str();
  check(vt_evaluate(model.get(), manifest.get(), features.get(), split, settings.get(), &report));
  const std::string text = take(report);
  const json r = json::parse(text);
  for (const auto& w : r.at("warnings")) std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());

  std::printf("%-16s %8s %10s %8s\n", "descriptor", "pairs", "accuracy", "EER");
  for (const auto& d : r.at("descriptors"))
    std::printf("%-16s %8zu %10s %8s\n", d.at("descriptor").get<std::string>().c_str(), d.at("pairs").get<size_t>(),
                fmt_pct(d.at("accuracy")).c_str(), fmt_pct(d.at("eer")).c_str());
  std::printf("%-16s %8zu %10s %8s\n", "all", r.at("pairs").get<size_t>(), fmt_pct(r.at("accuracy")).c_str(),
              fmt_pct(r.at("eer")).c_str());
  std::printf("threshold %.3f; score >= threshold means B is stronger\n", r.at("threshold").get<double>());
  if (r.contains("cost")) {
    const auto& c = r.at("cost");
    std::printf("cost: extraction %.4g flops/s, classifier %.4g flops/pair, %.0f params\n",
                c.at("extraction_flops_per_second").get<double>(), c.at("classifier_flops_per_pair").get<double>(),
                c.at("classifier_params").get<double>());
  }
  if (!a.out.empty()) {
    write_file(a.out, text);
    std::printf("report %s\n", a.out.c_str());
  }
}

// ---- weights ----

struct WeightsArgs {
  std::string model;
  std::string out;
  size_t top = 0;
};

void run_weights(const WeightsArgs& a) {
  Model model = load_model(a.model);
  char* w = nullptr;
  check(vt_model_weights(model.get(), &w));
  json rows = json::parse(take(w)).at("weights");
  std::vector<std::pair<std::string, double>> v;
  for (const auto& r : rows) v.emplace_back(r.at("feature").get<std::string>(), r.at("weight").get<double>());
  std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return std::abs(x.second) > std::abs(y.second); });
  const size_t shown = a.top ? std::min(a.top, v.size()) : v.size();
  std::printf("%4s  %-16s %10s\n", "rank", "feature", "weight");
  for (size_t i = 0; i < shown; ++i) std::printf("%4zu  %-16s %10.5f\n", i + 1, v[i].first.c_str(), v[i].second);
  if (!a.out.empty()) {
    std::ostringstream csv;
    csv << "rank,feature,weight\n";
    char buf[40];
    for (size_t i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", v[i].second);
      csv << i + 1 << ',' << v[i].first << ',' << buf << '\n';
    }
    write_file(a.out, csv.str());
  }
}

// ---- flops ----

struct FlopsArgs {
  std::string kind = "acoustic";
  std::string model;
  std::string config;
  std::string out;
};

void run_flops(const FlopsArgs& a) {
  Settings settings = load_settings(a.config);
  Model model;
  if (!a.model.empty()) model = load_model(a.model);
  char* report = nullptr;
  check(vt_cost_report(a.kind.c_str(), model.get(), settings.get(), &report));
  const std::string text = take(report);
  const json r = json::parse(text);
  std::printf("feature kind          %s\n", r.at("feature_kind").get<std::string>().c_str());
  std::printf("extraction params     %.0f\n", r.at("extraction_params").get<double>());
  std::printf("extraction flops/s    %.6g\n", r.at("extraction_flops_per_second").get<double>());
  for (const auto& i : r.at("extraction_items"))
    std::printf("  %-20s %14.6g  %s\n", i.at("stage").get<std::string>().c_str(), i.at("flops").get<double>(),
                i.at("formula").get<std::string>().c_str());
  std::printf("classifier params     %.0f\n", r.at("classifier_params").get<double>());
  std::printf("classifier flops/pair %.0f (%.3f per param)\n", r.at("classifier_flops_per_pair").get<double>(),
              r.at("classifier_flops_per_param").get<double>());
  for (const auto& i : r.at("classifier_items"))
    std::printf("  %-20s %14.6g  %s\n", i.at("stage").get<std::string>().c_str(), i.at("flops").get<double>(),
                i.at("formula").get<std::string>().c_str());
  if (a.out.empty())
    std::printf("%s\n", text.c_str());
  else
    write_file(a.out, text);
}

// One line on stderr, parsable as JSON.
int report_failure(vt_status status, const std::string& message) {
  const json line = {{"error", vt_status_name(status)}, {"code", static_cast<int>(status)}, {"message", message}};
  std::fprintf(stderr, "%s\n", line.dump().c_str());
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "vtimbre: interpretable voice-timbre comparison.\n"
      "Scores lie in [0, 1]: 0 means utterance A is stronger in the descriptor, 1 means B.\n"
      "Manifest labels are \"A\" and \"B\"; a score >= threshold (default 0.5) predicts B."};
  app.set_version_flag("--version", std::string(vt_version()));
  app.require_subcommand(1);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Write a synthetic test signal as 16-bit WAV");
  c_synth->add_option("--kind", synth.kind, "sine, pulse_train, resonated_pulses, white_noise or mixture")
      ->capture_default_str();
  c_synth->add_option("--f0", synth.f0, "Fundamental in Hz (> 0 for voiced kinds)")->capture_default_str();
  c_synth->add_option("--dur", synth.duration, "Duration in seconds")->capture_default_str();
  c_synth->add_option("--amplitude", synth.amplitude, "Peak amplitude")->capture_default_str();
  c_synth->add_option("--formant", synth.formants, "FREQ:BANDWIDTH in Hz, repeatable");
  c_synth->add_option("--subharmonic-gain", synth.subharmonic_gain, "Linear gain of the f0/2 component")
      ->capture_default_str();
  c_synth->add_option("--noise", synth.noise_gain, "White-noise gain")->capture_default_str();
  c_synth->add_option("--rolloff", synth.rolloff, "Source rolloff per harmonic")->capture_default_str();
  c_synth->add_option("--seed", synth.seed, "Noise seed")->capture_default_str();
  c_synth->add_option("--rate", synth.rate, "Sample rate in Hz")->capture_default_str();
  c_synth->add_option("-o,--out", synth.out, "Output WAV")->required();

  ExtractArgs extract;
  auto* c_extract = app.add_subcommand("extract", "Extract utterance-level features from WAV files");
  c_extract->add_option("inputs", extract.inputs, "WAV files, directories, or @list.txt")->required();
  c_extract->add_option("--kind", extract.kind, "acoustic, mfcc or lfc")->capture_default_str();
  c_extract->add_option("--config", extract.config, "JSON settings file or inline JSON");
  c_extract->add_option("-j,--jobs", extract.jobs, "Worker threads, 0 = all cores")->capture_default_str();
  c_extract->add_option("-o,--out", extract.out, "Feature file (.csv, or .jsonl)")->required();
  c_extract->add_option("--skip-list", extract.skip_list, "Skipped-file list (default <out>.skipped.jsonl)");

  TrainArgs train;
  auto* c_train = app.add_subcommand("train", "Train the pairwise classifier on the manifest's train split");
  c_train->add_option("--manifest", train.manifest, "Pair manifest (JSON lines)")->required();
  c_train->add_option("--features", train.features, "Feature file")->required();
  c_train->add_option("--config", train.config, "JSON settings file or inline JSON");
  c_train->add_option("--seed", train.seed, "Initialisation and shuffling seed")->capture_default_str();
  c_train->add_option("-o,--out", train.out, "Checkpoint path")->required();
  c_train->add_option("--log", train.log, "Training log (default <out>.log.json)");

  EvalArgs eval;
  auto* c_eval = app.add_subcommand("eval", "Accuracy and EER per descriptor");
  c_eval->add_option("--manifest", eval.manifest, "Pair manifest (JSON lines)")->required();
  c_eval->add_option("--features", eval.features, "Feature file")->required();
  c_eval->add_option("--model", eval.model, "Checkpoint")->required();
  c_eval->add_option("--config", eval.config, "JSON settings file or inline JSON");
  c_eval->add_option("--split", eval.split, "test, train or all")
      ->check(CLI::IsMember({"test", "train", "all"}))
      ->capture_default_str();
  c_eval->add_option("-o,--out", eval.out, "JSON report with the DET curve");

  WeightsArgs weights;
  auto* c_weights = app.add_subcommand("weights", "Learned feature weights, largest magnitude first");
  c_weights->add_option("--model", weights.model, "Checkpoint")->required();
  c_weights->add_option("--top", weights.top, "Show only the first N rows");
  c_weights->add_option("-o,--out", weights.out, "CSV output");

  FlopsArgs flops;
  auto* c_flops = app.add_subcommand("flops", "Analytical parameter and FLOP counts");
  c_flops->add_option("--kind", flops.kind, "acoustic, mfcc or lfc")->capture_default_str();
  c_flops->add_option("--model", flops.model, "Checkpoint (default classifier shape if omitted)");
  c_flops->add_option("--config", flops.config, "JSON settings file or inline JSON");
  c_flops->add_option("-o,--out", flops.out, "JSON output (printed after the table if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_failure(VT_ERR_INVALID_ARGUMENT, e.what());
  }

  try {
    if (c_synth->parsed()) run_synth(synth);
    if (c_extract->parsed()) run_extract(extract);
    if (c_train->parsed()) run_train(train);
    if (c_eval->parsed()) run_eval(eval);
    if (c_weights->parsed()) run_weights(weights);
    if (c_flops->parsed()) run_flops(flops);
  } catch (const Failure& f) {
    return report_failure(f.status, f.message);
  } catch (const json::exception& e) {
    return report_failure(VT_ERR_INTERNAL, e.what());
  } catch (const std::exception& e) {
    return report_failure(VT_ERR_INTERNAL, e.what());
  }
  return 0;
}
