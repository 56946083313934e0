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
#include "vtimbre/audio.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  for (double s : samples_) {
    if (!std::isfinite(s))
      throw Error(ErrorCode::kInvalidArgument, "audio contains non-finite samples");
  }
}

double AudioBuffer::peak() const {
  double p = 0.0;
  for (double s : samples_) p = std::max(p, std::abs(s));
  return p;
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

constexpr double kStopbandDb = 80.0;

struct SincKernel {
  double scale;       // min(1, out/in): cutoff relative to the input rate
  double cutoff;      // normalised to the input Nyquist
  double half_width;  // in input samples
  double beta;
  double i0_beta;

  double operator()(double t) const {
    if (std::abs(t) >= half_width) return 0.0;
    const double x = cutoff * t;
    const double sinc = x == 0.0 ? 1.0 : std::sin(dsp::kPi * x) / (dsp::kPi * x);
    const double r = t / half_width;
    return cutoff * sinc * bessel_i0(beta * std::sqrt(1.0 - r * r)) / i0_beta;
  }
};

SincKernel make_kernel(int in_rate, int out_rate) {
  SincKernel k{};
  k.scale = std::min(1.0, static_cast<double>(out_rate) / in_rate);
  // Passband to 0.9 of the lower Nyquist, stopband from the lower Nyquist.
  k.cutoff = 0.95 * k.scale;
  const double transition = 0.1 * k.scale * dsp::kPi;  // rad/sample at input rate
  const double taps = (kStopbandDb - 8.0) / (2.285 * transition);
  k.half_width = std::ceil(0.5 * taps) + 1.0;
  k.beta = 0.1102 * (kStopbandDb - 8.7);
  k.i0_beta = bessel_i0(k.beta);
  return k;
}

}  // namespace

std::size_t resample_taps(int in_rate, int out_rate) {
  if (in_rate <= 0 || out_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "rates must be positive");
  if (in_rate == out_rate) return 0;
  return 2 * static_cast<std::size_t>(make_kernel(in_rate, out_rate).half_width) + 1;
}

AudioBuffer resample(const AudioBuffer& buf, int target_rate) {
  if (target_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  if (target_rate == buf.sample_rate()) return buf;
  const int in_rate = buf.sample_rate();
  const auto x = buf.samples();
  const auto n_in = static_cast<std::int64_t>(x.size());
  const std::int64_t n_out =
      (n_in * target_rate + in_rate / 2) / in_rate;  // round(n_in * ratio)
  const SincKernel kernel = make_kernel(in_rate, target_rate);
  const auto hw = static_cast<std::int64_t>(kernel.half_width);

  // Output sample n sits at input position n * in / out; with the reduced
  // ratio p/q the fractional part cycles through q phases, each with a fixed
  // tap set normalised to unit DC gain.
  const int g = std::gcd(in_rate, target_rate);
  const std::int64_t p = in_rate / g, q = target_rate / g;
  std::vector<double> out(static_cast<std::size_t>(n_out), 0.0);
  const std::size_t width = static_cast<std::size_t>(2 * hw + 1);
  const bool tabulate = q <= 4096;
  std::vector<double> table;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(q) * width);
    for (std::int64_t ph = 0; ph < q; ++ph) {
      const double frac = static_cast<double>(ph) / static_cast<double>(q);
      double sum = 0.0;
      for (std::int64_t j = -hw; j <= hw; ++j) {
        const double h = kernel(frac - static_cast<double>(j));
        table[static_cast<std::size_t>(ph) * width + static_cast<std::size_t>(j + hw)] = h;
        sum += h;
      }
      for (std::size_t j = 0; j < width; ++j) table[static_cast<std::size_t>(ph) * width + j] /= sum;
    }
  }
  std::vector<double> taps(width);
  for (std::int64_t n = 0; n < n_out; ++n) {
    const std::int64_t num = n * p;
    const std::int64_t base = num / q;
    const std::int64_t ph = num % q;
    const double* h;
    if (tabulate) {
      h = &table[static_cast<std::size_t>(ph) * width];
    } else {
      const double frac = static_cast<double>(ph) / static_cast<double>(q);
      double sum = 0.0;
      for (std::int64_t j = -hw; j <= hw; ++j) {
        taps[static_cast<std::size_t>(j + hw)] = kernel(frac - static_cast<double>(j));
        sum += taps[static_cast<std::size_t>(j + hw)];
      }
      for (double& t : taps) t /= sum;
      h = taps.data();
    }
    double acc = 0.0;
    const std::int64_t lo = std::max<std::int64_t>(0, base - hw);
    const std::int64_t hi = std::min<std::int64_t>(n_in - 1, base + hw);
    for (std::int64_t k = lo; k <= hi; ++k)
      acc += x[static_cast<std::size_t>(k)] * h[k - base + hw];
    out[static_cast<std::size_t>(n)] = acc;
  }
  return AudioBuffer(std::move(out), target_rate);
}

// ---------------------------------------------------------------------------
// Framing

std::size_t frame_count(std::size_t num_samples, int sample_rate, const FrameSpec& spec) {
  if (!(spec.step > 0.0) || spec.window < spec.step)
    throw Error(ErrorCode::kInvalidArgument, "frame spec requires step > 0 and window >= step");
  const auto length = static_cast<std::size_t>(std::lround(spec.window * sample_rate));
  if (num_samples < length || length == 0) return 0;
  const double step_samples = spec.step * sample_rate;
  const double span = static_cast<double>(num_samples - length);
  return static_cast<std::size_t>(std::floor(span / step_samples + 1e-9)) + 1;
}

std::ptrdiff_t window_start(double t, int sample_rate, std::size_t length) {
  return static_cast<std::ptrdiff_t>(
      std::lround(t * sample_rate - 0.5 * static_cast<double>(length)));
}

std::vector<FrameSlice> frame_slices(const AudioBuffer& buf, const FrameSpec& spec) {
  const std::size_t count = frame_count(buf.size(), buf.sample_rate(), spec);
  if (count == 0)
    throw Error(ErrorCode::kTooShort, "audio is shorter than one analysis window");
  const auto length = static_cast<std::size_t>(std::lround(spec.window * buf.sample_rate()));
  std::vector<FrameSlice> frames;
  frames.reserve(count);
  const auto all = buf.samples();
  for (std::size_t k = 0; k < count; ++k) {
    const auto start = static_cast<std::size_t>(
        std::lround(static_cast<double>(k) * spec.step * buf.sample_rate()));
    const double center = 0.5 * spec.window + static_cast<double>(k) * spec.step;
    frames.push_back({center, all.subspan(start, length)});
  }
  return frames;
}

// ---------------------------------------------------------------------------
// Synthesis

SynthKind parse_synth_kind(const std::string& name) {
  if (name == "sine") return SynthKind::kSine;
  if (name == "pulse_train") return SynthKind::kPulseTrain;
  if (name == "resonated_pulses") return SynthKind::kResonatedPulses;
  if (name == "white_noise") return SynthKind::kWhiteNoise;
  if (name == "mixture") return SynthKind::kMixture;
  throw Error(ErrorCode::kInvalidArgument, "unknown synth kind '" + name + "'");
}

const char* synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::kSine: return "sine";
    case SynthKind::kPulseTrain: return "pulse_train";
    case SynthKind::kResonatedPulses: return "resonated_pulses";
    case SynthKind::kWhiteNoise: return "white_noise";
    case SynthKind::kMixture: return "mixture";
  }
  return "?";
}

namespace {

void validate(const SynthSpec& s) {
  auto bad = [](const std::string& why) { throw Error(ErrorCode::kInvalidArgument, "synth: " + why); };
  if (!(s.duration > 0.0)) bad("duration must be positive");
  if (s.sample_rate <= 0) bad("sample rate must be positive");
  if (!(s.amplitude >= 0.0) || !std::isfinite(s.amplitude)) bad("amplitude must be finite and >= 0");
  if (s.kind != SynthKind::kWhiteNoise && !(s.f0 > 0.0)) bad("f0 must be positive");
  if (s.kind != SynthKind::kWhiteNoise && s.f0 >= 0.5 * s.sample_rate) bad("f0 must be below Nyquist");
  for (const auto& r : s.formants) {
    if (!(r.frequency > 0.0) || r.frequency >= 0.5 * s.sample_rate) bad("formant frequency out of range");
    if (!(r.bandwidth > 0.0)) bad("formant bandwidth must be positive");
  }
  if (!(s.subharmonic_gain >= 0.0) || !(s.noise_gain >= 0.0)) bad("gains must be >= 0");
  if (!(s.source_rolloff >= 0.0 && s.source_rolloff < 1.0)) bad("source_rolloff must lie in [0, 1)");
}

// Band-limited impulses at the exact times k / f0. A pulse that falls on a
// sample is a single unit sample; otherwise it is a Kaiser-windowed sinc.
std::vector<double> pulses(const SynthSpec& s, std::size_t n, double alternate) {
  constexpr int kHalf = 16;
  constexpr double kBeta = 8.0;
  const double i0_beta = bessel_i0(kBeta);
  std::vector<double> x(n, 0.0);
  const double period = s.sample_rate / s.f0;
  for (std::size_t k = 0;; ++k) {
    const double pos = static_cast<double>(k) * period;
    if (pos >= static_cast<double>(n)) break;
    const double amp = (k % 2 == 0) ? 1.0 + alternate : 1.0 - alternate;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9) {
      x[static_cast<std::size_t>(nearest)] += amp;
      continue;
    }
    const auto centre = static_cast<std::ptrdiff_t>(nearest);
    for (std::ptrdiff_t j = centre - kHalf; j <= centre + kHalf; ++j) {
      if (j < 0 || j >= static_cast<std::ptrdiff_t>(n)) continue;
      const double d = static_cast<double>(j) - pos;
      const double r = d / (kHalf + 1);
      if (std::abs(r) >= 1.0) continue;
      const double sinc = std::sin(dsp::kPi * d) / (dsp::kPi * d);
      x[static_cast<std::size_t>(j)] += amp * sinc * bessel_i0(kBeta * std::sqrt(1.0 - r * r)) / i0_beta;
    }
  }
  return x;
}

void rolloff(std::vector<double>& x, double rho) {
  if (rho == 0.0) return;
  double prev = 0.0;
  for (double& v : x) {
    prev = v + rho * prev;
    v = prev * (1.0 - rho);  // unit gain at DC
  }
}

// Cascade of two-pole resonators, each with unit gain at DC.
void resonate(std::vector<double>& x, const std::vector<Resonance>& formants, int rate) {
  for (const auto& f : formants) {
    const double r = std::exp(-dsp::kPi * f.bandwidth / rate);
    const double theta = 2.0 * dsp::kPi * f.frequency / rate;
    const double a1 = 2.0 * r * std::cos(theta), a2 = -r * r;
    const double gain = 1.0 - a1 - a2;
    double y1 = 0.0, y2 = 0.0;
    for (double& v : x) {
      const double y = gain * v + a1 * y1 + a2 * y2;
      y2 = y1;
      y1 = y;
      v = y;
    }
  }
}

void normalise_peak(std::vector<double>& x, double amplitude) {
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  if (p > 0.0) for (double& v : x) v *= amplitude / p;
}

}  // namespace

AudioBuffer synth(const SynthSpec& s) {
  validate(s);
  const auto n = static_cast<std::size_t>(std::llround(s.duration * s.sample_rate));
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "synth: duration shorter than one sample");
  std::vector<double> x(n, 0.0);
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  switch (s.kind) {
    case SynthKind::kSine:
      for (std::size_t i = 0; i < n; ++i)
        x[i] = s.amplitude * std::sin(2.0 * dsp::kPi * s.f0 * static_cast<double>(i) / s.sample_rate);
      break;
    case SynthKind::kPulseTrain:
      x = pulses(s, n, 0.0);
      for (double& v : x) v *= s.amplitude;
      break;
    case SynthKind::kResonatedPulses:
    case SynthKind::kMixture: {
      const bool mix = s.kind == SynthKind::kMixture;
      x = pulses(s, n, mix ? s.subharmonic_gain : 0.0);
      rolloff(x, s.source_rolloff);
      resonate(x, s.formants, s.sample_rate);
      normalise_peak(x, s.amplitude);
      if (mix && s.noise_gain > 0.0)
        for (double& v : x) v += s.noise_gain * uniform(rng);
      break;
    }
    case SynthKind::kWhiteNoise: {
      const double g = s.noise_gain > 0.0 ? s.noise_gain : s.amplitude;
      for (double& v : x) v = g * uniform(rng);
      break;
    }
  }
  double p = 0.0;
  for (double v : x) p = std::max(p, std::abs(v));
  if (p > 1.0) for (double& v : x) v /= p;
  return AudioBuffer(std::move(x), s.sample_rate);
}

AudioBuffer concat(const AudioBuffer& a, const AudioBuffer& b) {
  if (a.sample_rate() != b.sample_rate())
    throw Error(ErrorCode::kInvalidArgument, "concat: sample rates differ");
  std::vector<double> x(a.samples().begin(), a.samples().end());
  x.insert(x.end(), b.samples().begin(), b.samples().end());
  return AudioBuffer(std::move(x), a.sample_rate());
}

AudioBuffer scaled(const AudioBuffer& buf, double gain) {
  std::vector<double> x(buf.samples().begin(), buf.samples().end());
  for (double& v : x) v *= gain;
  return AudioBuffer(std::move(x), buf.sample_rate());
}

}  // namespace vt
