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

#include "test_util.hpp"
#include "vtimbre/audio.hpp"
#include "vtimbre/noise_metrics.hpp"

namespace vt {
namespace {

constexpr int kRate = 16000;

// 40 ms from the middle of a synthesised buffer.
std::vector<double> slice(const AudioBuffer& b) {
  const auto x = b.samples();
  const std::size_t start = x.size() / 2 - 320;
  return {x.begin() + static_cast<std::ptrdiff_t>(start), x.begin() + static_cast<std::ptrdiff_t>(start + 640)};
}

AudioBuffer pulses(double f0) { return synth({.kind = SynthKind::kPulseTrain, .f0 = f0, .duration = 0.3}); }

AudioBuffer noise(std::uint64_t seed) {
  return synth({.kind = SynthKind::kWhiteNoise, .duration = 0.3, .noise_gain = 0.5, .seed = seed});
}

// Flat mixture: no source tilt, no resonances.
double mixture_shr(double f0, double gain) {
  const AudioBuffer b = synth({.kind = SynthKind::kMixture, .f0 = f0, .duration = 0.3, .amplitude = 0.8,
                               .subharmonic_gain = gain, .source_rolloff = 0.0});
  return shr(magnitude_spectrum(slice(b), kRate), f0);
}

TEST(Cpp, PulseTrain100) {
  const CppResult r = cepstral_peak(slice(pulses(100.0)), kRate);
  EXPECT_NEAR(r.quefrency, 0.010, 0.0002);
  EXPECT_GT(r.prominence, 10.0);
}

TEST(Cpp, PulseAboveNoiseEverySeed) {
  const double p = cpp(slice(pulses(100.0)), kRate);
  for (std::uint64_t seed = 0; seed < 20; ++seed) EXPECT_GT(p - cpp(slice(noise(seed)), kRate), 5.0) << seed;
}

TEST(Cpp, QuefrencyTracksPeriod) {
  for (double f0 = 80.0; f0 <= 400.0; f0 += 20.0) {
    const CppResult r = cepstral_peak(slice(pulses(f0)), kRate);
    EXPECT_NEAR(r.quefrency, 1.0 / f0, 0.05 / f0) << f0;
  }
}

TEST(Cpp, GainInvariant) {
  const auto x = slice(synth({.kind = SynthKind::kMixture, .f0 = 150, .duration = 0.3, .formants = {{700, 80}},
                              .noise_gain = 0.05, .seed = 3}));
  const double ref = cpp(x, kRate);
  for (double c : {1e-3, 0.37, 5.0}) {
    std::vector<double> y = x;
    for (double& v : y) v *= c;
    EXPECT_NEAR(cpp(y, kRate), ref, 1e-6) << c;
  }
}

TEST(Cpp, Errors) {
  EXPECT_VT_ERROR(cpp(std::vector<double>(400, 0.1), kRate), ErrorCode::kTooShort);
  CppConfig bad;
  bad.quefrency_floor = 0.02;
  EXPECT_VT_ERROR(cpp(std::vector<double>(640, 0.1), kRate, bad), ErrorCode::kInvalidArgument);
}

TEST(Shr, PureCombHitsFloor) { EXPECT_DOUBLE_EQ(mixture_shr(200.0, 0.0), -30.0); }

TEST(Shr, PeriodDoubledIsZeroDb) { EXPECT_NEAR(mixture_shr(200.0, 1.0), 0.0, 1.0); }

// At 200 Hz the slice holds whole subharmonic periods. Elsewhere leakage
// from harmonics f0/2 away moves the reading by up to ~1.3 dB.
TEST(Shr, TenthGainIsMinus20) { EXPECT_NEAR(mixture_shr(200.0, 0.1), -20.0, 1.0); }

TEST(Shr, MonotoneInGain) {
  for (double f0 : {160.0, 200.0, 240.0}) {
    double prev = -1e300;
    for (double g : {0.0, 0.05, 0.1, 0.3, 1.0}) {
      const double v = mixture_shr(f0, g);
      EXPECT_GE(v, prev) << f0 << " gain " << g;
      prev = v;
    }
  }
}

TEST(Shr, GainInvariant) {
  const AudioBuffer b = synth({.kind = SynthKind::kMixture, .f0 = 200, .duration = 0.3, .subharmonic_gain = 0.2,
                               .source_rolloff = 0.0});
  const auto x = slice(b);
  std::vector<double> y = x;
  for (double& v : y) v *= 0.01;
  EXPECT_NEAR(shr(magnitude_spectrum(x, kRate), 200.0), shr(magnitude_spectrum(y, kRate), 200.0), 1e-9);
}

TEST(Shr, Errors) {
  const Spectrum s = magnitude_spectrum(std::vector<double>(640, 0.1), kRate);
  EXPECT_VT_ERROR(shr(s, 0.0), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(shr(s, 5000.0), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace vt
