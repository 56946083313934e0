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
// Acceptance report: one PASS/FAIL line per criterion, details indented
// below it. Exits 0 unless --strict is given and something failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vtimbre/audio.hpp"
#include "vtimbre/diffnet.hpp"
#include "vtimbre/error.hpp"
#include "vtimbre/eval.hpp"
#include "vtimbre/features.hpp"
#include "vtimbre/formants.hpp"
#include "vtimbre/harmonics.hpp"
#include "vtimbre/io.hpp"
#include "vtimbre/noise_metrics.hpp"
#include "vtimbre/pipeline.hpp"
#include "vtimbre/pitch.hpp"
#include "vtimbre/testkit.hpp"

namespace {

using namespace vt;
using Clock = std::chrono::steady_clock;
constexpr int kRate = 16000;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Check {
  bool pass = true;
  std::vector<std::string> details;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "MISS ") + what);
  }
  void note(const std::string& what) { details.push_back("info " + what); }
};

int g_failures = 0;

void report(const char* name, const Check& c) {
  std::printf("%s  %s\n", c.pass ? "PASS" : "FAIL", name);
  for (const auto& d : c.details) std::printf("        %s\n", d.c_str());
  std::fflush(stdout);
  g_failures += !c.pass;
}

// Runs `body`, turning an escaped vt::Error into a failed requirement.
Check guarded(const std::function<void(Check&)>& body) {
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("threw: ") + e.what());
  }
  return c;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> middle_slice(const AudioBuffer& b) {
  const auto x = b.samples();
  const std::size_t start = x.size() / 2 - 320;
  return {x.begin() + static_cast<std::ptrdiff_t>(start), x.begin() + static_cast<std::ptrdiff_t>(start + 640)};
}

// ---- DSP oracle suite ----

void dsp_pitch(Check& c) {
  for (double f0 : {100.0, 150.0, 200.0, 300.0}) {
    const AudioBuffer b = synth({.kind = SynthKind::kPulseTrain, .f0 = f0, .duration = 1.0});
    std::size_t voiced = 0, within = 0;
    for (const auto& f : pitch_track(b, {}, 0.01)) {
      if (!f.f0) continue;
      ++voiced;
      within += std::abs(*f.f0 - f0) <= 0.03 * f0;
    }
    const double share = voiced ? 100.0 * static_cast<double>(within) / static_cast<double>(voiced) : 0.0;
    c.require(voiced > 0 && share >= 90.0, fmt("pitch %3.0f Hz pulses: %5.1f%% of %zu voiced frames within 3%%", f0, share, voiced));
  }
}

// Worst median formant error over F1..F4 of a neutral 4-resonance voice.
double worst_formant_error(double f0) {
  const std::vector<Resonance> truth = {{500, 80}, {1500, 100}, {2500, 150}, {3500, 200}};
  const AudioBuffer s = synth({.kind = SynthKind::kResonatedPulses, .f0 = f0, .duration = 1.0, .formants = truth});
  const auto track = formant_track(s, {}, 0.01, 0.04);
  double worst = 0.0;
  for (int i = 1; i <= 4; ++i) {
    std::vector<double> v;
    for (const auto& f : track)
      if (auto x = f.get(i)) v.push_back(x->frequency);
    if (v.empty()) return INFINITY;
    worst = std::max(worst, std::abs(median(v) - truth[static_cast<std::size_t>(i - 1)].frequency) /
                                truth[static_cast<std::size_t>(i - 1)].frequency);
  }
  return 100.0 * worst;
}

void dsp_formants(Check& c) {
  for (double f0 : {100.0, 120.0, 150.0, 170.0, 180.0, 190.0, 200.0, 220.0, 250.0}) {
    const double e = worst_formant_error(f0);
    c.require(e <= 3.0, fmt("formants at f0 %3.0f Hz: worst median error %.2f%%", f0, e));
  }
}

std::vector<double> comb(double f0, const std::vector<double>& amps) {
  std::vector<double> x(640, 0.0);
  for (std::size_t k = 0; k < amps.size(); ++k)
    for (std::size_t i = 0; i < x.size(); ++i)
      x[i] += amps[k] * std::cos(2.0 * std::numbers::pi * f0 * static_cast<double>(k + 1) * static_cast<double>(i) / kRate + 0.3 * static_cast<double>(k));
  return x;
}

void dsp_harmonics(Check& c) {
  for (double f0 : {110.0, 200.0, 290.0}) {
    std::vector<double> amps;
    for (int k = 1; f0 * k < 7500.0; ++k) amps.push_back(1.0 / k + 0.05 * (k % 3));
    const auto x = comb(f0, amps);
    const Spectrum s = magnitude_spectrum(x, kRate);
    double worst = 0.0;
    for (std::size_t k = 1; k <= amps.size(); ++k) {
      const double f = f0 * static_cast<double>(k);
      const auto got = harmonic_amplitude(s, f, f0);
      worst = std::max(worst, got ? std::abs(*got - testkit::dft_amplitude_oracle(x, f, kRate)) : INFINITY);
    }
    c.require(worst <= 0.5, fmt("harmonics f0 %3.0f Hz, %zu harmonics: max deviation from DFT oracle %.3f dB", f0,
                                amps.size(), worst));
  }
}

void dsp_cpp(Check& c) {
  const double pulse = cpp(middle_slice(synth({.kind = SynthKind::kPulseTrain, .f0 = 100.0, .duration = 0.3})), kRate);
  double min_gap = INFINITY, max_noise = -INFINITY;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double n = cpp(middle_slice(synth({.kind = SynthKind::kWhiteNoise, .duration = 0.3, .noise_gain = 0.5, .seed = seed})), kRate);
    min_gap = std::min(min_gap, pulse - n);
    max_noise = std::max(max_noise, n);
  }
  c.require(min_gap > 5.0, fmt("CPP pulse train %.2f dB; smallest pulse - noise gap over 20 seeds %.2f dB", pulse, min_gap));
  c.note(fmt("CPP of white noise reaches %.2f dB (an absolute level below 5 dB is not achieved)", max_noise));
}

double mixture_shr(double f0, double gain) {
  const AudioBuffer b = synth({.kind = SynthKind::kMixture, .f0 = f0, .duration = 0.3, .amplitude = 0.8,
                               .subharmonic_gain = gain, .source_rolloff = 0.0});
  return shr(magnitude_spectrum(middle_slice(b), kRate), f0);
}

void dsp_shr(Check& c) {
  bool monotone = true;
  for (double f0 : {160.0, 200.0, 240.0}) {
    double prev = -INFINITY;
    for (double g : {0.0, 0.05, 0.1, 0.3, 1.0}) {
      const double v = mixture_shr(f0, g);
      monotone = monotone && v >= prev;
      prev = v;
    }
  }
  c.require(monotone, "SHR non-decreasing in subharmonic gain {0, .05, .1, .3, 1} at f0 {160, 200, 240}");
  const double at = mixture_shr(200.0, 0.1);
  c.require(std::abs(at + 20.0) <= 1.0, fmt("SHR at gain 0.1, f0 200 Hz: %.2f dB", at));
  c.note(fmt("SHR at gain 0.1, f0 180 Hz: %.2f dB (window leakage when the slice is not a whole number of subharmonic periods)",
             mixture_shr(180.0, 0.1)));
}

// ---- numerical correctness ----

void gradient_check(Check& c) {
  DiffNetModel m = DiffNetModel::init(4, 6, {"a", "b", "c"}, 5);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> z(0.0, 1.0);
  for (Eigen::Index i = 0; i < m.gains.size(); ++i) m.gains[i] = 1.0 + 0.3 * z(rng);
  for (Eigen::Index i = 0; i < m.gamma.size(); ++i) m.gamma[i] = 1.0 + 0.2 * z(rng), m.beta[i] = 0.1 * z(rng);
  Eigen::MatrixXd x(8, 5);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = z(rng);
  const std::vector<std::size_t> out = {0, 1, 2, 0, 1};
  const std::vector<Label> lab = {Label::kAStronger, Label::kBStronger, Label::kBStronger, Label::kAStronger,
                                  Label::kBStronger};
  const DiffNetGrads g = backward(m, forward(m, x, Mode::kTrain), out, lab);

  struct Group {
    const char* name;
    double* (*slot)(DiffNetModel&);
    const double* analytic;
    std::size_t size;
  };
  const std::vector<Group> groups = {
      {"gains", [](DiffNetModel& d) { return d.gains.data(); }, g.gains.data(), static_cast<std::size_t>(g.gains.size())},
      {"w1", [](DiffNetModel& d) { return d.w1.data(); }, g.w1.data(), static_cast<std::size_t>(g.w1.size())},
      {"b1", [](DiffNetModel& d) { return d.b1.data(); }, g.b1.data(), static_cast<std::size_t>(g.b1.size())},
      {"gamma", [](DiffNetModel& d) { return d.gamma.data(); }, g.gamma.data(), static_cast<std::size_t>(g.gamma.size())},
      {"beta", [](DiffNetModel& d) { return d.beta.data(); }, g.beta.data(), static_cast<std::size_t>(g.beta.size())},
      {"w2", [](DiffNetModel& d) { return d.w2.data(); }, g.w2.data(), static_cast<std::size_t>(g.w2.size())},
      {"b2", [](DiffNetModel& d) { return d.b2.data(); }, g.b2.data(), static_cast<std::size_t>(g.b2.size())},
  };
  for (const auto& grp : groups) {
    DiffNetModel probe = m;
    const double* p = grp.slot(probe);
    const std::size_t n = grp.size;
    const auto fd = testkit::central_differences(
        [&](const std::vector<double>& v) {
          DiffNetModel t = m;
          std::copy(v.begin(), v.end(), grp.slot(t));
          return loss(forward(t, x, Mode::kTrain).scores, out, lab);
        },
        std::vector<double>(p, p + n), 1e-5);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, testkit::relative_error(grp.analytic[i], fd[i]));
    c.require(worst < 1e-4, fmt("gradient %-5s (%2zu entries): max relative error %.2e", grp.name, n, worst));
  }
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(double)) == 0;
}

bool same_model(const DiffNetModel& a, const DiffNetModel& b) {
  return same_bits(a.gains, b.gains) && same_bits(a.w1, b.w1) && same_bits(a.b1, b.b1) && same_bits(a.gamma, b.gamma) &&
         same_bits(a.beta, b.beta) && same_bits(a.w2, b.w2) && same_bits(a.b2, b.b2) &&
         same_bits(a.running_mean, b.running_mean) && same_bits(a.running_var, b.running_var);
}

void determinism(Check& c) {
  const testkit::SyntheticCorpus corpus = testkit::build_timbre_corpus(3, 24);
  bool extract_same = true;
  for (std::size_t i = 0; i < 4; ++i) {
    const AudioBuffer b = synth(corpus.utterances[i].spec);
    const auto x = extract_features(b, FeatureKind::kAcoustic), y = extract_features(b, FeatureKind::kAcoustic);
    extract_same = extract_same &&
                   std::memcmp(x.values.data(), y.values.data(), x.values.size() * sizeof(double)) == 0;
  }
  c.require(extract_same, "acoustic extraction of 4 corpus utterances is bitwise repeatable");

  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::MatrixXd utt(10, 100);
  for (Eigen::Index i = 0; i < utt.size(); ++i) utt.data()[i] = z(rng);
  std::vector<TrainingPair> pairs;
  for (std::size_t k = 0; k < 600; ++k) {
    const auto a = static_cast<Eigen::Index>(k % 100), b = static_cast<Eigen::Index>((k * 37 + 11) % 100);
    if (a == b) continue;
    TrainingPair p;
    p.e_a = {utt.col(a).data(), 10};
    p.e_b = {utt.col(b).data(), 10};
    p.output = k % 3;
    p.label = utt(0, a) > utt(0, b) ? Label::kAStronger : Label::kBStronger;
    pairs.push_back(p);
  }
  std::vector<std::string> names;
  for (int i = 0; i < 10; ++i) names.push_back("x" + std::to_string(i));
  TrainConfig cfg;
  cfg.descriptors = {"d0", "d1", "d2"};
  cfg.epochs = 5;
  cfg.batch_size = 64;
  const TrainResult a = train(pairs, utt, cfg, names, "custom"), b = train(pairs, utt, cfg, names, "custom");
  c.require(same_model(a.model, b.model), "training twice with seed 0 gives bitwise identical weights");
  cfg.seed = 1;
  c.require(!same_model(a.model, train(pairs, utt, cfg, names, "custom").model), "seed 1 gives different weights");
}

// ---- metric oracles ----

void metric_oracles(Check& c) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ScoredPair> s(1000);
  for (auto& p : s) {
    p.label = rng() % 2 ? Label::kBStronger : Label::kAStronger;
    p.score = std::round(u(rng) * 200.0) / 200.0;  // ties included
  }
  const double diff = std::abs(eer(s) - testkit::brute_force_eer(s));
  c.require(diff <= 1e-12, fmt("EER vs exhaustive sweep on 1000 random pairs: |diff| = %.1e", diff));

  std::vector<ScoredPair> sep(1000);
  for (std::size_t i = 0; i < sep.size(); ++i) {
    sep[i].label = i % 2 ? Label::kBStronger : Label::kAStronger;
    sep[i].score = i % 2 ? 0.6 + 0.3 * u(rng) : 0.1 + 0.3 * u(rng);
  }
  const double e0 = eer(sep), a0 = accuracy(sep);
  c.require(e0 == 0.0 && a0 == 100.0, fmt("perfectly separated scores: EER %.2f%%, accuracy %.2f%%", e0, a0));

  std::vector<Label> labels;
  for (const auto& p : sep) labels.push_back(p.label);
  std::shuffle(labels.begin(), labels.end(), rng);
  for (std::size_t i = 0; i < sep.size(); ++i) sep[i].label = labels[i];
  const double ap = accuracy(sep);
  c.require(std::abs(ap - 50.0) <= 5.0, fmt("permuted labels on 1000 pairs: accuracy %.2f%%", ap));
}

// ---- end to end ----

struct EndToEnd {
  EvalReport report;
  std::vector<FeatureWeight> weights;  // sorted by |weight|, largest first
  std::size_t utterances = 0, skipped = 0, train_pairs = 0, test_pairs = 0;
  double symmetric = 0.0;  // percent of test pairs with |s(A,B) + s(B,A) - 1| <= 0.1
};

EndToEnd run_end_to_end(std::uint64_t seed, std::size_t size, const std::filesystem::path& dir) {
  const testkit::SyntheticCorpus corpus = testkit::build_timbre_corpus(seed, size);
  std::filesystem::create_directories(dir);
  const auto paths = testkit::write_corpus(corpus, dir.string());
  const ExtractionResult ex = extract_files(paths, FeatureKind::kAcoustic, {}, 0);
  const auto records = read_manifest((dir / "manifest.jsonl").string());
  const auto train_set = select_split(records, "train"), test_set = select_split(records, "test");
  TrainConfig cfg;
  cfg.descriptors = corpus.descriptors;
  cfg.seed = 0;
  const TrainResult tr = train_from_table(ex.table, train_set, cfg);
  EndToEnd out;
  out.report = evaluate(score_records(tr.model, ex.table, test_set));
  out.weights = feature_importance(tr.model);
  std::stable_sort(out.weights.begin(), out.weights.end(),
                   [](const FeatureWeight& a, const FeatureWeight& b) { return std::abs(a.weight) > std::abs(b.weight); });
  std::size_t close = 0;
  for (const auto& r : test_set) {
    const auto& a = ex.table.find(r.pair.utt_a)->values;
    const auto& b = ex.table.find(r.pair.utt_b)->values;
    const double s = score_pair(tr.model, a, b, r.pair.descriptor) + score_pair(tr.model, b, a, r.pair.descriptor);
    close += std::abs(s - 1.0) <= 0.1;
  }
  out.symmetric = test_set.empty() ? 0.0 : 100.0 * static_cast<double>(close) / static_cast<double>(test_set.size());
  out.utterances = paths.size();
  out.skipped = ex.skipped.size();
  out.train_pairs = train_set.size();
  out.test_pairs = test_set.size();
  return out;
}

std::size_t rank_of(const std::vector<FeatureWeight>& w, const std::set<std::string>& names) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (names.count(w[i].name)) return i + 1;
  return w.size() + 1;
}

const std::vector<std::pair<std::string, std::set<std::string>>> kPlanted = {
    {"higher", {"f0_mean"}},
    {"brighter", {"h1h2_mean", "h2h4_mean", "h4h2k_mean", "h2k_h5k_mean"}},
    {"rougher", {"shr_mean"}},
};

bool end_to_end_pass(const EndToEnd& e) {
  bool ok = e.report.descriptors.size() == 3;
  for (const auto& d : e.report.descriptors) ok = ok && d.accuracy >= 90.0 && d.eer && *d.eer <= 10.0;
  for (const auto& [name, features] : kPlanted) ok = ok && rank_of(e.weights, features) <= 3;
  return ok;
}

void end_to_end(Check& c, std::uint64_t seed, std::size_t size, const std::filesystem::path& dir) {
  const auto t0 = Clock::now();
  const EndToEnd e = run_end_to_end(seed, size, dir);
  c.note(fmt("seed %llu: %zu utterances (%zu skipped), %zu train / %zu test pairs, %.1f s",
             static_cast<unsigned long long>(seed), e.utterances, e.skipped, e.train_pairs, e.test_pairs,
             seconds_since(t0)));
  c.require(e.report.descriptors.size() == 3, fmt("%zu descriptors evaluated", e.report.descriptors.size()));
  for (const auto& d : e.report.descriptors) {
    c.require(d.accuracy >= 90.0, fmt("%-9s accuracy %6.2f%% on %zu test pairs", d.descriptor.c_str(), d.accuracy, d.pairs));
    c.require(d.eer && *d.eer <= 10.0, fmt("%-9s EER %6.2f%%", d.descriptor.c_str(), d.eer ? *d.eer : NAN));
  }
  c.note(fmt("score(A,B) + score(B,A) within 0.1 of 1 on %.2f%% of test pairs", e.symmetric));
  std::string top;
  for (std::size_t i = 0; i < 5 && i < e.weights.size(); ++i)
    top += fmt("%s%s %.3f", i ? ", " : "", e.weights[i].name.c_str(), e.weights[i].weight);
  c.note("top weights: " + top);
  for (const auto& [name, features] : kPlanted) {
    const std::size_t r = rank_of(e.weights, features);
    c.require(r <= 3, fmt("%-9s planted feature (%s%s) ranks %zu", name.c_str(), features.begin()->c_str(),
                          features.size() > 1 ? " or another tilt mean" : "", r));
  }
}

// ---- cost and throughput ----

void cost(Check& c) {
  const ExtractionConfig ex;
  const CostReport a = cost_report(FeatureKind::kAcoustic, ex, {}), m = cost_report(FeatureKind::kMfcc, ex, {}),
                   l = cost_report(FeatureKind::kLfc, ex, {});
  c.require(a.extraction_params == 0, fmt("acoustic extraction params %zu", a.extraction_params));
  c.require(l.extraction_flops_per_second < m.extraction_flops_per_second,
            fmt("lfc %.4f M < mfcc %.4f M flops/s", l.extraction_flops_per_second / 1e6, m.extraction_flops_per_second / 1e6));
  c.require(m.extraction_flops_per_second < a.extraction_flops_per_second,
            fmt("mfcc %.4f M < acoustic %.4f M flops/s", m.extraction_flops_per_second / 1e6, a.extraction_flops_per_second / 1e6));
  const double factor = a.extraction_flops_per_second / 17.85e6;
  c.require(factor <= 3.0 && factor >= 1.0 / 3.0, fmt("acoustic %.2f M flops/s is %.2fx of 17.85 M", a.extraction_flops_per_second / 1e6, factor));
  const double ratio = a.classifier_flops_per_pair / static_cast<double>(a.classifier_params);
  c.require(ratio >= 1.8 && ratio <= 2.2, fmt("classifier %zu params, %.0f flops per pair, ratio %.3f", a.classifier_params,
                                              a.classifier_flops_per_pair, ratio));
}

void throughput(Check& c) {
  const AudioBuffer b = synth({.kind = SynthKind::kResonatedPulses, .f0 = 120, .duration = 1.0,
                               .formants = {{500, 80}, {1500, 100}, {2500, 150}, {3500, 200}}});
  (void)extract_features(b, FeatureKind::kAcoustic);  // warm caches
  std::vector<double> ms;
  for (int i = 0; i < 5; ++i) {
    const auto t0 = Clock::now();
    (void)extract_features(b, FeatureKind::kAcoustic);
    ms.push_back(1000.0 * seconds_since(t0));
  }
  const double med = median(ms);
  c.require(med < 100.0, fmt("26-dim vector from 1 s at 16 kHz: median %.1f ms over 5 runs, single thread", med));
}

// ---- conditional dataset criterion ----

void dataset(Check& c, const std::string& manifest, const std::string& features) {
  const FeatureTable table = read_feature_table(features);
  const auto records = read_manifest(manifest);
  TrainConfig cfg;
  const TrainResult tr = train_from_table(table, select_split(records, "train"), cfg);
  const EvalReport r = evaluate(score_records(tr.model, table, select_split(records, "test")));
  c.require(std::abs(r.accuracy - 82.87) <= 3.0, fmt("unseen-split accuracy %.2f%% (target 82.87 +- 3)", r.accuracy));
  c.require(r.eer && std::abs(*r.eer - 17.21) <= 3.0, fmt("unseen-split EER %.2f%% (target 17.21 +- 3)", r.eer ? *r.eer : NAN));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vtimbre acceptance report"};
  bool strict = false;
  std::size_t seeds = 1, size = 240;
  std::string vctk_manifest, vctk_features;
  app.add_flag("--strict", strict, "Exit 1 when any criterion fails");
  app.add_option("--seeds", seeds, "Also summarise the end-to-end run over seeds 0..N-1")->capture_default_str();
  app.add_option("--size", size, "Synthetic corpus size")->capture_default_str();
  app.add_option("--vctk-manifest", vctk_manifest, "VCTK-RVA pair manifest for the dataset criterion");
  app.add_option("--vctk-features", vctk_features, "Acoustic feature file covering that manifest");
  CLI11_PARSE(app, argc, argv);

  const auto dir = std::filesystem::temp_directory_path() / ("vtimbre_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  const auto t_dsp = Clock::now();
  Check dsp = guarded([](Check& c) {
    dsp_pitch(c);
    dsp_formants(c);
    dsp_harmonics(c);
    dsp_cpp(c);
    dsp_shr(c);
  });
  const double dsp_s = seconds_since(t_dsp);
  dsp.require(dsp_s < 60.0, fmt("suite runtime %.2f s single-threaded", dsp_s));
  report("DSP oracle suite", dsp);

  report("Numerical correctness", guarded([](Check& c) {
           gradient_check(c);
           determinism(c);
         }));
  report("Metric oracles", guarded(metric_oracles));
  report("End-to-end synthetic corpus (seed 0)",
         guarded([&](Check& c) { end_to_end(c, 0, size, dir / "seed0"); }));
  report("Cost reporting", guarded(cost));
  report("Throughput", guarded(throughput));

  if (vctk_manifest.empty() || vctk_features.empty()) {
    std::printf("NOT RUN  VCTK-RVA dataset (conditional): pass --vctk-manifest and --vctk-features\n");
  } else {
    report("VCTK-RVA dataset (conditional)", guarded([&](Check& c) { dataset(c, vctk_manifest, vctk_features); }));
  }

  if (seeds > 1) {
    std::size_t passed = 0;
    std::string failing;
    for (std::uint64_t s = 0; s < seeds; ++s) {
      try {
        const EndToEnd e = run_end_to_end(s, size, dir / ("seed" + std::to_string(s)));
        const bool ok = end_to_end_pass(e);
        passed += ok;
        double worst_acc = 100.0, worst_eer = 0.0;
        for (const auto& d : e.report.descriptors) {
          worst_acc = std::min(worst_acc, d.accuracy);
          worst_eer = std::max(worst_eer, d.eer ? *d.eer : INFINITY);
        }
        std::printf("INFO  seed %2llu: %s  min accuracy %.2f%%, max EER %.2f%%, ranks higher %zu brighter %zu rougher %zu\n",
                    static_cast<unsigned long long>(s), ok ? "pass" : "fail", worst_acc, worst_eer,
                    rank_of(e.weights, kPlanted[0].second), rank_of(e.weights, kPlanted[1].second),
                    rank_of(e.weights, kPlanted[2].second));
      } catch (const std::exception& e) {
        std::printf("INFO  seed %2llu: error %s\n", static_cast<unsigned long long>(s), e.what());
      }
    }
    std::printf("INFO  end-to-end criterion holds on %zu of %zu seeds\n", passed, seeds);
  }

  std::filesystem::remove_all(dir);
  std::printf("%d criterion(s) failed\n", g_failures);
  return strict && g_failures ? 1 : 0;
}
