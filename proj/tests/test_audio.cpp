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
#include <numbers>

#include "test_util.hpp"
#include "vtimbre/audio.hpp"
#include "vtimbre/formants.hpp"
#include "vtimbre/harmonics.hpp"
#include "vtimbre/testkit.hpp"

namespace vt {
namespace {

using test::TempDir;

AudioBuffer sine(double freq, double seconds, int rate, double amp = 1.0) {
  std::vector<double> x(static_cast<std::size_t>(std::lround(seconds * rate)));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * freq * i / rate);
  return AudioBuffer(std::move(x), rate);
}

double mean_square(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s / static_cast<double>(x.size());
}

// Frequency of the largest oracle reading on a 0.1 Hz grid around `guess`.
double oracle_peak(std::span<const double> x, double guess, int rate) {
  double best_f = guess, best = -1e300;
  for (double f = guess - 5.0; f <= guess + 5.0; f += 0.1) {
    const double v = testkit::dft_amplitude_oracle(x, f, rate);
    if (v > best) best = v, best_f = f;
  }
  return best_f;
}

TEST(AudioBuffer, RejectsBadInput) {
  EXPECT_VT_ERROR(AudioBuffer({0.0}, 0), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(AudioBuffer({0.0, NAN}, 16000), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(AudioBuffer({INFINITY}, 16000), ErrorCode::kInvalidArgument);
}

TEST(LoadAudio, Pcm16Normalisation) {
  TempDir dir("wav16");
  test::write_raw_wav(dir.file("a.wav"), 1, 1, 16000, 16, test::pcm16({0, 16384, -16384}));
  const AudioBuffer b = load_audio(dir.file("a.wav"));
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b.sample_rate(), 16000);
  EXPECT_EQ(b.samples()[0], 0.0);
  EXPECT_EQ(b.samples()[1], 0.5);
  EXPECT_EQ(b.samples()[2], -0.5);
}

TEST(LoadAudio, StereoIsAveraged) {
  TempDir dir("stereo");
  test::write_raw_wav(dir.file("s.wav"), 3, 2, 16000, 32, test::float32({1.0f, 0.0f}));
  const AudioBuffer b = load_audio(dir.file("s.wav"));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b.samples()[0], 0.5);
}

TEST(LoadAudio, ResamplesTo16k) {
  TempDir dir("48k");
  std::vector<std::int16_t> v(48000);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = static_cast<std::int16_t>(std::lround(8000.0 * std::sin(2.0 * std::numbers::pi * 440.0 * i / 48000.0)));
  test::write_raw_wav(dir.file("h.wav"), 1, 1, 48000, 16, test::pcm16(v));
  const AudioBuffer b = load_audio(dir.file("h.wav"));
  EXPECT_EQ(b.sample_rate(), kAnalysisRate);
  EXPECT_LE(std::abs(static_cast<double>(b.size()) - 48000.0 * 16000.0 / 48000.0), 1.0);
  EXPECT_EQ(load_wav_native(dir.file("h.wav")).sample_rate(), 48000);
}

TEST(LoadAudio, Errors) {
  TempDir dir("bad");
  EXPECT_VT_ERROR(load_audio(dir.file("missing.wav")), ErrorCode::kIo);
  test::write_text(dir.file("junk.wav"), "not a riff file at all");
  EXPECT_VT_ERROR(load_audio(dir.file("junk.wav")), ErrorCode::kUnsupportedFormat);
}

TEST(Wav16, RoundTrip) {
  TempDir dir("rt");
  const AudioBuffer a({0.0, 0.25, -0.5, 0.999}, 16000);
  write_wav16(a, dir.file("r.wav"));
  const AudioBuffer b = load_audio(dir.file("r.wav"));
  ASSERT_EQ(b.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(b.samples()[i], a.samples()[i], 1.0 / 32768.0);
}

TEST(Resample, IdentityIsBitwise) {
  const AudioBuffer a = synth({.kind = SynthKind::kWhiteNoise, .duration = 0.1, .noise_gain = 0.5, .seed = 3});
  const AudioBuffer b = resample(a, 16000);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.samples().data(), b.samples().data(), a.size() * sizeof(double)), 0);
}

TEST(Resample, KeepsSineFrequency) {
  const AudioBuffer out = resample(sine(1000.0, 1.0, 48000), 16000);
  EXPECT_EQ(out.sample_rate(), 16000);
  EXPECT_NEAR(oracle_peak(out.samples(), 1000.0, 16000), 1000.0, 1.0);
}

TEST(Resample, NoAliasFrom7k) {
  const AudioBuffer out = resample(sine(7000.0, 1.0, 48000), 16000);
  const auto mid = out.samples().subspan(4000, 4096);
  const Spectrum s = magnitude_spectrum(mid, 16000);
  std::size_t peak = 0;
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k)
    if (s.magnitudes[k] > s.magnitudes[peak]) peak = k;
  EXPECT_NEAR(peak * s.bin_hz(), 7000.0, s.bin_hz());
  const double ref = 20.0 * std::log10(s.magnitudes[peak]);
  double worst = -1e300;
  for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
    if (std::abs(k * s.bin_hz() - 7000.0) < 50.0) continue;
    worst = std::max(worst, 20.0 * std::log10(s.magnitudes[k] + 1e-300));
  }
  EXPECT_LT(worst - ref, -40.0);
}

TEST(Resample, EnergyPreservedInBand) {
  for (double f : {300.0, 3000.0, 6500.0}) {
    const AudioBuffer in = sine(f, 0.5, 44100, 0.7);
    for (int target : {16000, 22050, 48000}) {
      const AudioBuffer out = resample(in, target);
      const auto trim = [](std::span<const double> x) { return x.subspan(x.size() / 10, x.size() * 8 / 10); };
      EXPECT_NEAR(mean_square(trim(out.samples())) / mean_square(trim(in.samples())), 1.0, 0.01)
          << f << " Hz to " << target;
    }
  }
}

TEST(Frames, CountAndLength) {
  const AudioBuffer one(std::vector<double>(16000, 0.1), 16000);
  const auto frames = frame_slices(one, {});
  ASSERT_EQ(frames.size(), 97u);
  EXPECT_EQ(frames.front().samples.size(), 640u);
  EXPECT_DOUBLE_EQ(frames.front().center, 0.02);
  for (std::size_t i = 1; i < frames.size(); ++i) EXPECT_NEAR(frames[i].center - frames[i - 1].center, 0.01, 1e-12);

  EXPECT_EQ(frame_slices(AudioBuffer(std::vector<double>(640, 0.1), 16000), {}).size(), 1u);
  EXPECT_VT_ERROR(frame_slices(AudioBuffer(std::vector<double>(624, 0.1), 16000), {}), ErrorCode::kTooShort);
}

TEST(Frames, CountFormulaOverDurations) {
  for (std::size_t n = 640; n < 20000; n += 37) {
    const double duration = n / 16000.0;
    const auto expected = static_cast<std::size_t>(std::floor((duration - 0.04) / 0.01 + 1e-9)) + 1;
    EXPECT_EQ(frame_count(n, 16000, {}), expected) << n;
  }
}

TEST(Synth, SinePeak) {
  const AudioBuffer s = synth({.kind = SynthKind::kSine, .f0 = 100.0, .duration = 1.0});
  EXPECT_EQ(s.size(), 16000u);
  EXPECT_NEAR(oracle_peak(s.samples(), 100.0, 16000), 100.0, 0.2);
}

TEST(Synth, PulseSpacing) {
  const AudioBuffer s = synth({.kind = SynthKind::kPulseTrain, .f0 = 125.0, .duration = 0.5});
  const auto x = s.samples();
  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if (x[i] > 0.5 * s.peak() && x[i] >= x[i - 1] && x[i] > x[i + 1]) peaks.push_back(i);
  ASSERT_GT(peaks.size(), 50u);
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_EQ(peaks[i] - peaks[i - 1], 128u);
}

TEST(Synth, ResonancesRecoveredByLpc) {
  const std::vector<Resonance> truth = {{500, 80}, {1500, 100}, {2500, 150}, {3500, 200}};
  const AudioBuffer s = synth({.kind = SynthKind::kResonatedPulses, .f0 = 100.0, .duration = 1.0, .formants = truth});
  const auto track = formant_track(s, {}, 0.01, 0.04);
  for (int i = 1; i <= 4; ++i) {
    std::vector<double> v;
    for (const auto& f : track)
      if (auto x = f.get(i)) v.push_back(x->frequency);
    ASSERT_FALSE(v.empty());
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    EXPECT_NEAR(v[v.size() / 2], truth[i - 1].frequency, 0.03 * truth[i - 1].frequency) << "F" << i;
  }
}

TEST(Synth, SeededDeterminism) {
  const SynthSpec spec{.kind = SynthKind::kMixture, .f0 = 180, .formants = {{600, 90}}, .subharmonic_gain = 0.1,
                       .noise_gain = 0.01, .seed = 42};
  const AudioBuffer a = synth(spec), b = synth(spec);
  ASSERT_EQ(a.size(), b.size());
  EXPECT_EQ(std::memcmp(a.samples().data(), b.samples().data(), a.size() * sizeof(double)), 0);
  SynthSpec other = spec;
  other.seed = 43;
  const AudioBuffer c = synth(other);
  EXPECT_NE(std::memcmp(a.samples().data(), c.samples().data(), a.size() * sizeof(double)), 0);

  TempDir dir("det");
  write_wav16(a, dir.file("a.wav"));
  write_wav16(b, dir.file("b.wav"));
  EXPECT_EQ(test::slurp(dir.file("a.wav")), test::slurp(dir.file("b.wav")));
}

TEST(Synth, Validation) {
  EXPECT_VT_ERROR(synth({.kind = SynthKind::kSine, .f0 = 0.0}), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(synth({.kind = SynthKind::kPulseTrain, .f0 = -5.0}), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(synth({.kind = SynthKind::kSine, .duration = 0.0}), ErrorCode::kInvalidArgument);
  EXPECT_VT_ERROR(parse_synth_kind("square"), ErrorCode::kInvalidArgument);
  EXPECT_NO_THROW(synth({.kind = SynthKind::kWhiteNoise, .f0 = 0.0, .noise_gain = 0.1}));
}

}  // namespace
}  // namespace vt
