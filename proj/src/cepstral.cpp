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
// MFCC and linear-frequency cepstral baselines.

#include <cmath>

#include "dsp.hpp"
#include "vtimbre/error.hpp"
#include "vtimbre/features.hpp"

namespace vt {

namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

}  // namespace

std::vector<TriangularFilter> triangular_filterbank(FilterScale scale, std::size_t fft_size, int sample_rate,
                                                    const CepstralConfig& config) {
  const std::size_t m = config.filters;
  if (m == 0) throw Error(ErrorCode::kInvalidArgument, "filterbank needs at least one filter");
  const double high = std::min(config.high_hz, 0.5 * sample_rate);
  auto warp = [scale](double hz) { return scale == FilterScale::kMel ? hz_to_mel(hz) : hz; };
  auto unwarp = [scale](double v) { return scale == FilterScale::kMel ? mel_to_hz(v) : v; };
  const double lo = warp(config.low_hz), hi = warp(high);
  std::vector<double> edges(m + 2);
  for (std::size_t i = 0; i < m + 2; ++i)
    edges[i] = unwarp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m + 1));

  const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(fft_size);
  const std::size_t bins = fft_size / 2 + 1;
  std::vector<TriangularFilter> bank(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double left = edges[j], center = edges[j + 1], right = edges[j + 2];
    TriangularFilter& f = bank[j];
    bool started = false;
    for (std::size_t k = 0; k < bins; ++k) {
      const double hz = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (hz > left && hz < right) w = hz <= center ? (hz - left) / (center - left) : (right - hz) / (right - center);
      if (w > 0.0) {
        if (!started) {
          f.first_bin = k;
          started = true;
        }
        f.weights.resize(k - f.first_bin + 1, 0.0);
        f.weights.back() = w;
      }
    }
  }
  return bank;
}

CepstralVector cepstral_features(const AudioBuffer& input, FilterScale scale, const CepstralConfig& config) {
  if (input.empty()) throw Error(ErrorCode::kEmptyAudio, "empty audio buffer");
  if (config.coefficients != kCepstralDim || config.filters < config.coefficients)
    throw Error(ErrorCode::kInvalidArgument, "cepstral config needs 13 coefficients and at least as many filters");
  const AudioBuffer buf = input.sample_rate() == kAnalysisRate ? input : resample(input, kAnalysisRate);
  const int rate = buf.sample_rate();
  const auto frames = frame_slices(buf, FrameSpec{config.hop, config.window});
  const std::size_t n = frames.front().samples.size();
  const std::size_t nfft = std::max<std::size_t>(4, dsp::next_pow2(n));
  const auto window = dsp::hann(n);
  const auto bank = triangular_filterbank(scale, nfft, rate, config);
  const std::size_t m = config.filters;

  // Orthonormal DCT-II basis, coefficients c0 .. c12.
  std::vector<double> dct(config.coefficients * m);
  for (std::size_t i = 0; i < config.coefficients; ++i) {
    const double norm = std::sqrt((i == 0 ? 1.0 : 2.0) / static_cast<double>(m));
    for (std::size_t j = 0; j < m; ++j)
      dct[i * m + j] = norm * std::cos(dsp::kPi * static_cast<double>(i) * (static_cast<double>(j) + 0.5) /
                                       static_cast<double>(m));
  }

  CepstralVector out;
  out.frames = frames.size();
  std::vector<double> frame(n), power, logs(m);
  std::vector<std::complex<double>> bins;
  for (const auto& slice : frames) {
    for (std::size_t i = 0; i < n; ++i) frame[i] = slice.samples[i] * window[i];
    dsp::rfft(frame, nfft, bins);
    power.resize(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) power[k] = std::norm(bins[k]);
    for (std::size_t j = 0; j < m; ++j) {
      double e = 0.0;
      for (std::size_t k = 0; k < bank[j].weights.size(); ++k) e += bank[j].weights[k] * power[bank[j].first_bin + k];
      logs[j] = std::log(std::max(e, config.log_floor));
    }
    for (std::size_t i = 0; i < config.coefficients; ++i) {
      double c = 0.0;
      for (std::size_t j = 0; j < m; ++j) c += dct[i * m + j] * logs[j];
      out.values[i] += c;
    }
  }
  for (double& v : out.values) v /= static_cast<double>(frames.size());
  return out;
}

}  // namespace vt
