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
#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "vtimbre/audio.hpp"
#include "vtimbre/formants.hpp"

namespace vt {
namespace {

constexpr double kRate = 11000.0;

// Monic polynomial with a conjugate pole pair per (frequency, bandwidth).
std::vector<double> poly_from_formants(const std::vector<Formant>& fs, double rate) {
  std::vector<double> p = {1.0};
  for (const auto& f : fs) {
    const double r = std::exp(-std::numbers::pi * f.bandwidth / rate);
    const double theta = 2.0 * std::numbers::pi * f.frequency / rate;
    const double q[3] = {1.0, -2.0 * r * std::cos(theta), r * r};
    std::vector<double> next(p.size() + 2, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (int j = 0; j < 3; ++j) next[i + j] += p[i] * q[j];
    p = next;
  }
  return {p.begin() + 1, p.end()};
}

TEST(Burg, RecoversAr2Pole) {
  const double rho = 0.95, theta = 2.0 * std::numbers::pi * 1000.0 / kRate;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> e(0.0, 1.0);
  std::vector<double> x(10000, 0.0);
  for (std::size_t n = 2; n < x.size(); ++n) x[n] = 2.0 * std::cos(theta) * rho * x[n - 1] - rho * rho * x[n - 2] + e(rng);
  const BurgResult r = burg(x, 2);
  const auto roots = lpc_roots(r.coefficients);
  ASSERT_EQ(roots.size(), 2u);
  const double hz = std::abs(std::arg(roots[0])) * kRate / (2.0 * std::numbers::pi);
  EXPECT_NEAR(hz, 1000.0, 20.0);
}

TEST(Burg, WhiteNoiseReflectionsSmall) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> e(0.0, 1.0);
  std::vector<double> x(4000);
  for (double& v : x) v = e(rng);
  const BurgResult r = burg(x, 2);
  ASSERT_EQ(r.reflection.size(), 2u);
  for (double k : r.reflection) EXPECT_LT(std::abs(k), 0.3);
}

TEST(Burg, ImpulseIsDegenerate) {
  std::vector<double> x(400, 0.0);
  x[200] = 1.0;
  bool degenerate = false;
  try {
    const BurgResult r = burg(x, 10);
    for (double c : r.coefficients) EXPECT_EQ(c, 0.0);
    degenerate = true;
  } catch (const Error& e) {
    degenerate = e.code() == ErrorCode::kDegenerate;
  }
  EXPECT_TRUE(degenerate);
  EXPECT_VT_ERROR(burg(std::vector<double>(400, 0.0), 10), ErrorCode::kDegenerate);
  EXPECT_VT_ERROR(burg(std::vector<double>(8, 1.0), 10), ErrorCode::kTooShort);
}

TEST(Burg, RootsInsideUnitCircle) {
  const std::vector<AudioBuffer> inputs = {
      synth({.kind = SynthKind::kResonatedPulses, .f0 = 130, .duration = 0.3,
             .formants = {{500, 80}, {1500, 100}, {2500, 150}, {3500, 200}}}),
      synth({.kind = SynthKind::kWhiteNoise, .duration = 0.3, .noise_gain = 0.5, .seed = 4}),
      synth({.kind = SynthKind::kSine, .f0 = 300, .duration = 0.3}),
      synth({.kind = SynthKind::kMixture, .f0 = 210, .duration = 0.3, .formants = {{800, 60}}, .subharmonic_gain = 0.3,
             .noise_gain = 0.02, .seed = 1})};
  const FormantConfig cfg;
  for (const auto& in : inputs) {
    const auto sig = prepare_formant_signal(in, cfg);
    const auto len = static_cast<std::size_t>(cfg.physical_window() * cfg.analysis_rate());
    for (std::size_t start = 0; start + len <= sig.size(); start += len / 2) {
      const BurgResult r = burg(std::span(sig).subspan(start, len), cfg.lpc_order());
      for (const auto& z : lpc_roots(r.coefficients)) EXPECT_LT(std::abs(z), 1.0);
    }
  }
}

TEST(RootsToFormants, SinglePair) {
  const double r = 0.97, theta = 2.0 * std::numbers::pi * 1200.0 / kRate;
  const std::vector<double> a = {-2.0 * r * std::cos(theta), r * r};
  const FormantFrame f = roots_to_formants(a, kRate, {});
  ASSERT_EQ(f.formants.size(), 1u);
  EXPECT_NEAR(f.formants[0].frequency, 1200.0, 1.0);
  EXPECT_NEAR(f.formants[0].bandwidth, -std::log(0.97) * kRate / std::numbers::pi, 0.1);
}

TEST(RootsToFormants, RealRootsOnly) {
  // (z - 0.5)(z + 0.3)
  const std::vector<double> a = {-0.2, -0.15};
  EXPECT_TRUE(roots_to_formants(a, kRate, {}).formants.empty());
}

TEST(RootsToFormants, FivePairsRoundTrip) {
  const std::vector<Formant> truth = {{500, 60}, {1500, 90}, {2500, 120}, {3500, 150}, {4500, 180}};
  const FormantFrame f = roots_to_formants(poly_from_formants(truth, kRate), kRate, {});
  ASSERT_EQ(f.formants.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(f.formants[i].frequency, truth[i].frequency, 1e-9 * truth[i].frequency);
    EXPECT_NEAR(f.formants[i].bandwidth, truth[i].bandwidth, 1e-9 * truth[i].bandwidth);
  }
}

TEST(RootsToFormants, DropsBroadAndEdgePoles) {
  const std::vector<Formant> truth = {{30, 50}, {900, 80}, {2000, 900}, {5480, 100}};
  const FormantFrame f = roots_to_formants(poly_from_formants(truth, kRate), kRate, {});
  ASSERT_EQ(f.formants.size(), 1u);
  EXPECT_NEAR(f.formants[0].frequency, 900.0, 1e-6);
}

std::vector<double> medians(const std::vector<FormantFrame>& track, int count) {
  std::vector<double> out;
  for (int i = 1; i <= count; ++i) {
    std::vector<double> v;
    for (const auto& f : track)
      if (auto x = f.get(i)) v.push_back(x->frequency);
    if (v.empty()) return out;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    out.push_back(v[v.size() / 2]);
  }
  return out;
}

// Low voices only: above ~170 Hz F1 drifts towards the nearest harmonic
// by more than 3%.
TEST(FormantTrack, ResonatedPulses) {
  const std::vector<Resonance> truth = {{500, 80}, {1500, 100}, {2500, 150}, {3500, 200}};
  for (double f0 : {90.0, 100.0, 110.0, 120.0}) {
    const AudioBuffer s = synth({.kind = SynthKind::kResonatedPulses, .f0 = f0, .duration = 1.0, .formants = truth});
    const auto m = medians(formant_track(s, {}, 0.01, 0.04), 4);
    ASSERT_EQ(m.size(), 4u) << f0;
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(m[i], truth[i].frequency, 0.03 * truth[i].frequency) << "F" << i + 1;
  }
}

void expect_ascending(const std::vector<FormantFrame>& track) {
  for (const auto& f : track)
    for (std::size_t i = 0; i < f.formants.size(); ++i) {
      EXPECT_GT(f.formants[i].frequency, 0.0);
      EXPECT_LT(f.formants[i].frequency, 5500.0);
      EXPECT_GT(f.formants[i].bandwidth, 0.0);
      if (i) {
        EXPECT_GT(f.formants[i].frequency, f.formants[i - 1].frequency);
      }
    }
}

TEST(FormantTrack, WhiteNoiseRuns) {
  const AudioBuffer n = synth({.kind = SynthKind::kWhiteNoise, .duration = 1.0, .noise_gain = 0.5, .seed = 3});
  const auto t = formant_track(n, {}, 0.01, 0.04);
  EXPECT_EQ(t.size(), frame_count(n.size(), 16000, {0.01, 0.05}));
  expect_ascending(t);
}

TEST(FormantTrack, SineGivesLowF1OrNothing) {
  const AudioBuffer s = synth({.kind = SynthKind::kSine, .f0 = 100.0, .duration = 1.0});
  const auto t = formant_track(s, {}, 0.01, 0.04);
  expect_ascending(t);
  for (const auto& f : t)
    if (auto f1 = f.get(1)) {
      EXPECT_NEAR(f1->frequency, 100.0, 30.0);
    }
}

TEST(FormantTrack, AmplitudeInvariant) {
  const AudioBuffer s = synth({.kind = SynthKind::kMixture, .f0 = 160, .duration = 0.5,
                               .formants = {{650, 80}, {1100, 90}, {2600, 120}, {3400, 150}, {4800, 250}},
                               .noise_gain = 0.001, .seed = 8});
  const auto ref = formant_track(s, {}, 0.01, 0.04);
  const auto t = formant_track(scaled(s, 0.37), {}, 0.01, 0.04);
  ASSERT_EQ(ref.size(), t.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    ASSERT_EQ(t[k].formants.size(), ref[k].formants.size());
    for (std::size_t i = 0; i < t[k].formants.size(); ++i)
      EXPECT_NEAR(t[k].formants[i].frequency, ref[k].formants[i].frequency, 1e-6 * ref[k].formants[i].frequency);
  }
}

TEST(Dispersion, Cases) {
  EXPECT_DOUBLE_EQ(*dispersion(500.0, 3500.0), 1000.0);
  EXPECT_DOUBLE_EQ(*dispersion(800.0, 800.0), 0.0);
  EXPECT_FALSE(dispersion(500.0, std::nullopt).has_value());
  EXPECT_FALSE(dispersion(std::nullopt, 3500.0).has_value());
}

}  // namespace
}  // namespace vt
