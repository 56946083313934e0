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
// Audio ingestion: WAV I/O, band-limited resampling, framing and the
// synthetic test-signal generator used by the oracle suites.

#ifndef VTIMBRE_AUDIO_HPP_
#define VTIMBRE_AUDIO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vt {

// All analysis runs at this rate; load_audio() resamples to it.
inline constexpr int kAnalysisRate = 16000;

// Mono signal plus its sample rate. Immutable once constructed.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  // Throws kInvalidArgument for a non-positive rate or non-finite samples.
  AudioBuffer(std::vector<double> samples, int sample_rate);

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration() const {
    return sample_rate_ > 0 ? static_cast<double>(samples_.size()) / sample_rate_ : 0.0;
  }
  // Largest absolute sample value.
  double peak() const;

 private:
  std::vector<double> samples_;
  int sample_rate_ = 0;
};

struct FrameSpec {
  double step = 0.010;    // seconds between frame centres
  double window = 0.040;  // slice length in seconds
};

struct FrameSlice {
  double center = 0.0;              // seconds
  std::span<const double> samples;  // view into the source buffer
};

// Reads linear-PCM (8/16/24/32-bit) or 32-bit float RIFF/WAVE, averages
// channels, and resamples to kAnalysisRate. No dithering.
AudioBuffer load_audio(const std::string& path);

// Same as load_audio() but keeps the file's native rate.
AudioBuffer load_wav_native(const std::string& path);

// 16-bit PCM mono, little-endian. Samples are clipped to [-1, 1].
void write_wav16(const AudioBuffer& buf, const std::string& path);

// Kaiser-windowed sinc interpolation. Passband is flat to 0.9 of the lower
// Nyquist rate and the stopband starts at the lower Nyquist rate. Returns a
// copy when the rates already match.
AudioBuffer resample(const AudioBuffer& buf, int target_rate);

// Taps per output sample used by resample() for this rate pair (0 when the
// rates are equal).
std::size_t resample_taps(int in_rate, int out_rate);

// Number of complete slices: floor((duration - window) / step) + 1.
std::size_t frame_count(std::size_t num_samples, int sample_rate, const FrameSpec& spec);

// Slices centred at window/2, window/2 + step, ...; each holds exactly
// round(window * rate) samples. The returned spans alias `buf`.
std::vector<FrameSlice> frame_slices(const AudioBuffer& buf, const FrameSpec& spec);

// Index of the first sample of a window of `length` samples centred at `t`.
std::ptrdiff_t window_start(double t, int sample_rate, std::size_t length);

enum class SynthKind { kSine, kPulseTrain, kResonatedPulses, kWhiteNoise, kMixture };

struct Resonance {
  double frequency = 0.0;  // Hz
  double bandwidth = 0.0;  // Hz
};

struct SynthSpec {
  SynthKind kind = SynthKind::kSine;
  double f0 = 100.0;
  double duration = 1.0;
  double amplitude = 1.0;
  std::vector<Resonance> formants;
  // Mixture only: the pulse amplitudes alternate between 1 + g and 1 - g,
  // which puts spectral lines at odd multiples of f0/2.
  double subharmonic_gain = 0.0;
  // Mixture and white noise: uniform noise in [-noise_gain, noise_gain].
  double noise_gain = 0.0;
  // One-pole source lowpass coefficient in [0, 1) applied to the pulses
  // before the resonators; larger values give a steeper spectral tilt.
  double source_rolloff = 0.9;
  std::uint64_t seed = 0;
  int sample_rate = kAnalysisRate;
};

SynthKind parse_synth_kind(const std::string& name);
const char* synth_kind_name(SynthKind kind);

// Deterministic for a given spec (including seed).
AudioBuffer synth(const SynthSpec& spec);

// Concatenates buffers of equal rate.
AudioBuffer concat(const AudioBuffer& a, const AudioBuffer& b);

// Multiplies every sample by `gain`.
AudioBuffer scaled(const AudioBuffer& buf, double gain);

}  // namespace vt

#endif  // VTIMBRE_AUDIO_HPP_
