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
// Oracles and the seeded synthetic corpus used by the test suites.

#ifndef VTIMBRE_TESTKIT_HPP_
#define VTIMBRE_TESTKIT_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vtimbre/audio.hpp"
#include "vtimbre/eval.hpp"
#include "vtimbre/io.hpp"

namespace vt::testkit {

// Direct DFT of the Hann-windowed frame evaluated at exactly `freq`, in dB
// with the reference of harmonic_amplitude (unscaled modulus). Clamped
// below at -120 dB.
double dft_amplitude_oracle(std::span<const double> samples, double freq, int sample_rate);

// EER by exhaustive sweep: every score (and +inf) is tried as a threshold
// and FAR/FRR are recounted from scratch. O(n^2).
double brute_force_eer(std::span<const ScoredPair> scored);

// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h for every i.
std::vector<double> central_differences(const std::function<double(const std::vector<double>&)>& f,
                                        std::vector<double> x, double h);

// |a - b| / max(|a|, |b|, floor).
double relative_error(double a, double b, double floor = 1e-8);

struct CorpusUtterance {
  std::string id;       // "<speaker>_<n>"
  std::string speaker;  // "s00", "s01", ...
  std::string split;    // "train" or "test"
  SynthSpec spec;
};

struct SyntheticCorpus {
  std::vector<CorpusUtterance> utterances;
  std::vector<ManifestRecord> manifest;
  std::vector<std::string> descriptors;  // "higher", "brighter", "rougher"

  const CorpusUtterance& find(const std::string& id) const;
};

// Knob behind a synthetic descriptor; larger means stronger.
// higher: f0. brighter: -source_rolloff. rougher: subharmonic_gain.
double ground_truth(const SynthSpec& spec, const std::string& descriptor);

// Resonated, tilted pulse voices (mixture synth) from synthetic speakers of
// three utterances each. Each speaker owns an f0, a source rolloff, a
// subharmonic gain and a vowel; utterances jitter them slightly and vary
// level and breath noise. A quarter of the speakers are held out for the
// test split. Pairs are drawn within a split, only when the knob differs
// by a clear margin, and appear in both orders; labels follow the knob.
SyntheticCorpus build_timbre_corpus(std::uint64_t seed, std::size_t size);

// Renders every utterance to <dir>/<id>.wav and the pairs to
// <dir>/manifest.jsonl. Returns the WAV paths in corpus order.
std::vector<std::string> write_corpus(const SyntheticCorpus& corpus, const std::string& dir);

}  // namespace vt::testkit

#endif  // VTIMBRE_TESTKIT_HPP_
