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
#include "vtimbre/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

namespace {

constexpr double kMinMagnitude = 1e-12;

double to_db(double magnitude) { return 20.0 * std::log10(std::max(magnitude, kMinMagnitude)); }

}  // namespace

Spectrum magnitude_spectrum(std::span<const double> window, int sample_rate) {
  if (window.empty()) throw Error(ErrorCode::kInvalidArgument, "empty window");
  const std::size_t n = window.size();
  thread_local std::map<std::size_t, std::vector<double>> windows;
  auto it = windows.find(n);
  if (it == windows.end()) it = windows.emplace(n, dsp::hann(n)).first;
  const auto& w = it->second;

  thread_local std::vector<double> frame;
  thread_local std::vector<std::complex<double>> bins;
  frame.resize(n);
  for (std::size_t i = 0; i < n; ++i) frame[i] = window[i] * w[i];
  Spectrum spec;
  spec.window_length = n;
  spec.fft_size = std::max<std::size_t>(4, dsp::next_pow2(4 * n));
  spec.sample_rate = sample_rate;
  dsp::rfft(frame, spec.fft_size, bins);
  spec.magnitudes.resize(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) spec.magnitudes[k] = std::abs(bins[k]);
  return spec;
}

std::optional<double> harmonic_amplitude(const Spectrum& spec, double target, double f0) {
  if (!(f0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "f0 must be positive");
  if (!(target > 0.0) || target > spec.nyquist()) return std::nullopt;
  const double harmonic = std::max(1.0, std::round(target / f0)) * f0;
  const double lo = std::max(0.0, harmonic - 0.25 * f0);
  const double hi = std::min(spec.nyquist(), harmonic + 0.25 * f0);
  if (lo > hi) return std::nullopt;
  const auto k_lo = static_cast<std::size_t>(std::ceil(lo / spec.bin_hz()));
  const auto k_hi = std::min(spec.magnitudes.size() - 1, static_cast<std::size_t>(std::floor(hi / spec.bin_hz())));
  if (k_lo > k_hi) return std::nullopt;
  const double peak = *std::max_element(spec.magnitudes.begin() + static_cast<std::ptrdiff_t>(k_lo),
                                        spec.magnitudes.begin() + static_cast<std::ptrdiff_t>(k_hi) + 1);
  return to_db(peak);
}

double formant_gain_db(double freq, const Formant& formant, double fs) {
  const double r = std::exp(-dsp::kPi * formant.bandwidth / fs);
  const double wi = 2.0 * dsp::kPi * formant.frequency / fs;
  const double w = 2.0 * dsp::kPi * freq / fs;
  auto term = [r](double angle) { return 1.0 - 2.0 * r * std::cos(angle) + r * r; };
  const double num = term(wi);
  return 10.0 * std::log10(num * num / (term(w + wi) * term(w - wi)));
}

std::optional<double> formant_correction(double amp_db, double freq, const FormantFrame& formants,
                                         int count, int required, double fs) {
  double corrected = amp_db;
  for (int i = 1; i <= count; ++i) {
    const auto f = formants.get(i);
    if (!f) {
      if (i <= required) return std::nullopt;
      continue;
    }
    corrected -= formant_gain_db(freq, *f, fs);
  }
  return corrected;
}

TiltMeasures tilt_measures(const Spectrum& spec, double f0, const std::optional<FormantFrame>& formants) {
  const double fs = spec.sample_rate;
  auto measure = [&](double target, int count) -> std::optional<double> {
    const auto amp = harmonic_amplitude(spec, target, f0);
    if (!amp) return std::nullopt;
    if (!formants || count == 0) return amp;
    const double harmonic = std::max(1.0, std::round(target / f0)) * f0;
    return formant_correction(*amp, harmonic, *formants, count, 2, fs);
  };
  const auto h1 = measure(f0, 2);
  const auto h2 = measure(2.0 * f0, 2);
  const auto h4 = measure(4.0 * f0, 2);
  const auto h2k = measure(2000.0, 3);
  const auto h5k = measure(5000.0, 0);

  auto diff = [](const std::optional<double>& a, const std::optional<double>& b) -> std::optional<double> {
    if (!a || !b) return std::nullopt;
    return *a - *b;
  };
  return {diff(h1, h2), diff(h2, h4), diff(h4, h2k), diff(h2k, h5k)};
}

double rms_energy(std::span<const double> window) {
  if (window.empty()) throw Error(ErrorCode::kInvalidArgument, "empty window");
  double sum = 0.0;
  for (double v : window) sum += v * v;
  return std::sqrt(sum / static_cast<double>(window.size()));
}

}  // namespace vt
