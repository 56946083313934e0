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
#include "vtimbre/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <random>

#include "vtimbre/error.hpp"

namespace vt::testkit {

double dft_amplitude_oracle(std::span<const double> samples, double freq, int sample_rate) {
  const std::size_t n = samples.size();
  if (n == 0) return -120.0;
  if (!(freq >= 0.0 && freq < 0.5 * sample_rate))
    throw Error(ErrorCode::kInvalidArgument, "oracle frequency must lie below Nyquist");
  const double two_pi = 2.0 * std::numbers::pi;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    const double w = 0.5 - 0.5 * std::cos(two_pi * t / static_cast<double>(n));
    acc += samples[i] * w * std::polar(1.0, -two_pi * freq * t / sample_rate);
  }
  const double mag = std::abs(acc);
  return mag > 0.0 ? std::max(-120.0, 20.0 * std::log10(mag)) : -120.0;
}

double brute_force_eer(std::span<const ScoredPair> scored) {
  std::vector<double> thresholds;
  for (const auto& s : scored) thresholds.push_back(s.score);
  thresholds.push_back(std::numeric_limits<double>::infinity());
  std::sort(thresholds.begin(), thresholds.end());
  double prev_far = 0.0, prev_frr = 0.0;
  bool have_prev = false;
  for (double t : thresholds) {
    double neg = 0, pos = 0, false_accept = 0, false_reject = 0;
    for (const auto& s : scored) {
      if (s.label == Label::kBStronger) {
        ++pos;
        if (s.score < t) ++false_reject;
      } else {
        ++neg;
        if (s.score >= t) ++false_accept;
      }
    }
    if (pos == 0 || neg == 0) throw Error(ErrorCode::kSingleClass, "EER needs both labels");
    const double far = false_accept / neg, frr = false_reject / pos;
    if (far - frr <= 0.0) {
      if (!have_prev || far == frr) return 100.0 * far;
      const double d0 = prev_far - prev_frr, d1 = far - frr;
      const double alpha = d0 / (d0 - d1);
      return 100.0 * (prev_far + alpha * (far - prev_far));
    }
    prev_far = far;
    prev_frr = frr;
    have_prev = true;
  }
  return 100.0 * prev_far;
}

std::vector<double> central_differences(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> x, double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

double relative_error(double a, double b, double floor) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

const CorpusUtterance& SyntheticCorpus::find(const std::string& id) const {
  for (const auto& u : utterances)
    if (u.id == id) return u;
  throw Error(ErrorCode::kInvalidArgument, "no corpus utterance '" + id + "'");
}

double ground_truth(const SynthSpec& spec, const std::string& descriptor) {
  if (descriptor == "higher") return spec.f0;
  if (descriptor == "brighter") return -spec.source_rolloff;
  if (descriptor == "rougher") return spec.subharmonic_gain;
  throw Error(ErrorCode::kInvalidArgument, "no synthetic knob for '" + descriptor + "'");
}

namespace {

constexpr std::size_t kUtterancesPerSpeaker = 3;
constexpr std::size_t kMaxPairsPerDescriptor = 2000;  // per split, ordered

// F1..F5 and bandwidths. F5 keeps energy above F4, without it the LPC
// fit spends a pole pair on the noise floor and F4 is lost.
struct Vowel {
  double f[5];
  double bw[5];
};
constexpr Vowel kVowels[] = {
    {{700, 1220, 2600, 3400, 4900}, {80, 90, 120, 180, 250}},   // a
    {{530, 1840, 2480, 3500, 4900}, {70, 100, 120, 180, 250}},  // e
    {{570, 840, 2410, 3300, 4800}, {70, 90, 120, 180, 250}},    // o
    {{500, 1500, 2500, 3500, 4900}, {70, 90, 120, 180, 250}},   // schwa
};

// Whether the knob difference is large enough for a pair to be labelled.
// Roughness is compared in dB, like SHR itself.
bool separated(const SynthSpec& a, const SynthSpec& b, const std::string& descriptor) {
  if (descriptor == "higher") return std::abs(a.f0 - b.f0) >= 20.0;
  if (descriptor == "brighter") return std::abs(a.source_rolloff - b.source_rolloff) >= 0.12;
  return std::abs(20.0 * std::log10(a.subharmonic_gain / b.subharmonic_gain)) >= 5.0;
}

}  // namespace

SyntheticCorpus build_timbre_corpus(std::uint64_t seed, std::size_t size) {
  if (size < 2) throw Error(ErrorCode::kInvalidArgument, "corpus needs at least two utterances");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  SyntheticCorpus corpus;
  corpus.descriptors = {"higher", "brighter", "rougher"};
  const std::size_t speakers = (size + kUtterancesPerSpeaker - 1) / kUtterancesPerSpeaker;
  const std::size_t test_speakers = std::max<std::size_t>(1, speakers / 4);
  std::size_t made = 0;
  for (std::size_t s = 0; s < speakers; ++s) {
    char name[32];
    std::snprintf(name, sizeof(name), "s%02zu", s);
    const double f0 = uniform(150.0, 280.0);
    const double rolloff = uniform(0.5, 0.95);
    const double sub_db = uniform(-28.0, -20.0);
    const Vowel& vowel = kVowels[rng() % std::size(kVowels)];
    const double stretch = uniform(0.94, 1.06);  // vocal tract length
    const std::string split = s < speakers - test_speakers ? "train" : "test";
    for (std::size_t u = 0; u < kUtterancesPerSpeaker && made < size; ++u, ++made) {
      CorpusUtterance utt;
      utt.speaker = name;
      utt.id = std::string(name) + "_" + std::to_string(u);
      utt.split = split;
      SynthSpec& spec = utt.spec;
      spec.kind = SynthKind::kMixture;
      spec.duration = 1.0;
      spec.f0 = f0 * uniform(0.97, 1.03);
      spec.source_rolloff = std::clamp(rolloff + uniform(-0.02, 0.02), 0.0, 0.97);
      spec.subharmonic_gain = std::pow(10.0, (sub_db + uniform(-0.5, 0.5)) / 20.0);
      spec.amplitude = uniform(0.3, 0.9);
      spec.noise_gain = uniform(0.0002, 0.001);
      for (int k = 0; k < 5; ++k)
        spec.formants.push_back({vowel.f[k] * stretch * uniform(0.98, 1.02), vowel.bw[k]});
      spec.seed = rng();
      corpus.utterances.push_back(std::move(utt));
    }
  }

  for (const std::string split : {"train", "test"}) {
    std::vector<const CorpusUtterance*> members;
    for (const auto& u : corpus.utterances)
      if (u.split == split) members.push_back(&u);
    for (const auto& d : corpus.descriptors) {
      std::vector<std::pair<std::size_t, std::size_t>> eligible;
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          if (separated(members[i]->spec, members[j]->spec, d))
            eligible.emplace_back(i, j);
      for (std::size_t i = eligible.size(); i > 1; --i) std::swap(eligible[i - 1], eligible[rng() % i]);
      eligible.resize(std::min(eligible.size(), kMaxPairsPerDescriptor / 2));
      for (const auto& [i, j] : eligible) {
        for (const auto& [a, b] : {std::pair{members[i], members[j]}, std::pair{members[j], members[i]}}) {
          ManifestRecord r;
          r.pair.utt_a = a->id;
          r.pair.utt_b = b->id;
          r.pair.descriptor = d;
          r.pair.label = ground_truth(a->spec, d) > ground_truth(b->spec, d) ? Label::kAStronger : Label::kBStronger;
          r.split = split;
          corpus.manifest.push_back(std::move(r));
        }
      }
    }
  }
  return corpus;
}

std::vector<std::string> write_corpus(const SyntheticCorpus& corpus, const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& u : corpus.utterances) {
    paths.push_back(dir + "/" + u.id + ".wav");
    write_wav16(synth(u.spec), paths.back());
  }
  write_manifest(corpus.manifest, dir + "/manifest.jsonl");
  return paths;
}

}  // namespace vt::testkit
