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
#include "vtimbre/noise_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

CppResult cepstral_peak(std::span<const double> window, int sample_rate, const CppConfig& config) {
  if (!(config.quefrency_floor > 0.0 && config.quefrency_floor < config.quefrency_ceiling))
    throw Error(ErrorCode::kInvalidArgument, "CPP quefrency range is empty");
  const std::size_t n = window.size();
  if (static_cast<double>(n) < 2.0 * config.quefrency_ceiling * sample_rate)
    throw Error(ErrorCode::kTooShort, "CPP window shorter than twice the quefrency ceiling");

  thread_local std::map<std::size_t, std::vector<double>> windows;
  auto it = windows.find(n);
  if (it == windows.end()) it = windows.emplace(n, dsp::hann(n)).first;
  const auto& w = it->second;

  const std::size_t nfft = std::max<std::size_t>(4, dsp::next_pow2(n));
  thread_local std::vector<double> frame, cep;
  thread_local std::vector<std::complex<double>> bins;
  frame.resize(n);
  for (std::size_t i = 0; i < n; ++i) frame[i] = window[i] * w[i];
  dsp::rfft(frame, nfft, bins);

  // dB power spectrum; the floor is relative so the result is gain invariant.
  double max_power = 0.0;
  for (const auto& c : bins) max_power = std::max(max_power, std::norm(c));
  if (!(max_power > 0.0)) return {};
  const double floor = max_power * 1e-12;
  for (auto& c : bins) c = 10.0 * std::log10(std::max(std::norm(c), floor));
  dsp::irfft(bins, nfft, cep);
  for (double& v : cep) v *= v;
  const auto half_width = static_cast<std::size_t>(std::lround(0.5 * config.quefrency_smoothing * sample_rate));
  if (half_width > 0) {
    thread_local std::vector<double> raw;
    raw = cep;
    const std::size_t last = nfft / 2;
    for (std::size_t q = 0; q <= last; ++q) {
      const std::size_t lo = q > half_width ? q - half_width : 0, hi = std::min(last, q + half_width);
      double sum = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) sum += raw[j];
      cep[q] = sum / static_cast<double>(hi - lo + 1);
    }
  }
  for (double& v : cep) v = 10.0 * std::log10(std::max(v, 1e-30));

  const double rate = sample_rate;
  const auto q_lo = static_cast<std::size_t>(std::ceil(config.quefrency_floor * rate));
  const auto q_hi = std::min(nfft / 2 - 1, static_cast<std::size_t>(std::floor(config.quefrency_ceiling * rate)));
  std::size_t peak = q_lo;
  for (std::size_t q = q_lo; q <= q_hi; ++q)
    if (cep[q] > cep[peak]) peak = q;
  const auto vertex = dsp::parabolic_peak(cep[peak - 1], cep[peak], cep[peak + 1]);
  const double q_peak = static_cast<double>(peak) + vertex.offset;

  // Ordinary least squares over the trend range.
  const auto t_lo = static_cast<std::size_t>(std::ceil(config.trend_from * rate));
  const auto t_hi = std::min(nfft / 2 - 1, static_cast<std::size_t>(std::floor(config.trend_to * rate)));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(t_hi - t_lo + 1);
  for (std::size_t q = t_lo; q <= t_hi; ++q) {
    const double x = static_cast<double>(q);
    sx += x;
    sy += cep[q];
    sxx += x * x;
    sxy += x * cep[q];
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / count;
  return {vertex.value - (intercept + slope * q_peak), q_peak / rate};
}

double shr(const Spectrum& spec, double f0, const ShrConfig& config) {
  if (!(f0 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "f0 must be positive");
  if (config.harmonic_count_max < 2) throw Error(ErrorCode::kInvalidArgument, "harmonic_count_max must be >= 2");
  const int available = static_cast<int>(std::floor(spec.nyquist() / f0));
  const int count = std::min(config.harmonic_count_max, available);
  if (count < 2) throw Error(ErrorCode::kInvalidArgument, "fewer than two harmonics below Nyquist");

  auto peak_near = [&](double freq) {
    const double lo = std::max(0.0, freq - 0.125 * f0), hi = std::min(spec.nyquist(), freq + 0.125 * f0);
    const auto k_lo = static_cast<std::size_t>(std::ceil(lo / spec.bin_hz()));
    const auto k_hi = std::min(spec.magnitudes.size() - 1, static_cast<std::size_t>(std::floor(hi / spec.bin_hz())));
    double best = 0.0;
    for (std::size_t k = k_lo; k <= k_hi; ++k) best = std::max(best, spec.magnitudes[k]);
    return best;
  };
  double harmonic_sum = 0.0, sub_sum = 0.0;
  for (int k = 1; k <= count; ++k) {
    harmonic_sum += peak_near(k * f0);
    sub_sum += peak_near((k - 0.5) * f0);
  }
  if (!(harmonic_sum > 0.0)) return config.floor_db;
  if (!(sub_sum > 0.0)) return config.floor_db;
  return std::max(config.floor_db, 20.0 * std::log10(sub_sum / harmonic_sum));
}

}  // namespace vt
