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
#include "vtimbre/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

void PitchConfig::validate(int sample_rate) const {
  if (!(floor > 0.0 && floor < ceiling && ceiling < 0.5 * sample_rate))
    throw Error(ErrorCode::kInvalidArgument, "pitch config requires 0 < floor < ceiling < rate/2");
  if (!(voicing_threshold >= 0.0 && voicing_threshold <= 1.0))
    throw Error(ErrorCode::kInvalidArgument, "voicing threshold must lie in [0, 1]");
  if (lag_oversampling < 1 || lag_oversampling > 16)
    throw Error(ErrorCode::kInvalidArgument, "lag oversampling must lie in [1, 16]");
  if (!(silence_threshold >= 0.0))
    throw Error(ErrorCode::kInvalidArgument, "silence threshold must be >= 0");
}

namespace {

struct Workspace {
  std::vector<double> frame;
  std::vector<double> acf;
  std::vector<std::complex<double>> spec;
};

std::size_t acf_length(std::size_t n, std::size_t max_lag) {
  return std::max<std::size_t>(4, dsp::next_pow2(n + max_lag + 1));
}

// Autocorrelation on a lag grid `over` times finer than the sample grid:
// the power spectrum is zero-padded before the inverse transform, which is
// band-limited interpolation of the integer-lag values.
void autocorrelation(std::span<const double> x, std::size_t nfft, std::size_t over, Workspace& ws) {
  dsp::rfft(x, nfft, ws.spec);
  for (auto& c : ws.spec) c = std::norm(c);
  if (over > 1) {
    ws.spec.back() *= 0.5;  // the old Nyquist bin now has a mirror image
    ws.spec.resize(over * nfft / 2 + 1, 0.0);
  }
  dsp::irfft(ws.spec, over * nfft, ws.acf);
}

// Normalised autocorrelation of the Hann window, cached per shape.
const std::vector<double>& window_acf(std::size_t n, std::size_t nfft, std::size_t over) {
  thread_local std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<double>> cache;
  auto it = cache.find({n, nfft, over});
  if (it != cache.end()) return it->second;
  Workspace ws;
  const auto w = dsp::hann(n);
  autocorrelation(w, nfft, over, ws);
  const double r0 = ws.acf[0];
  for (double& v : ws.acf) v /= r0;
  return cache.emplace(std::make_tuple(n, nfft, over), std::move(ws.acf)).first->second;
}

}  // namespace

PitchEstimate frame_pitch(std::span<const double> window, const PitchConfig& config,
                          int sample_rate, double global_peak) {
  config.validate(sample_rate);
  const std::size_t n = window.size();
  if (static_cast<double>(n) < 2.0 * sample_rate / config.floor)
    throw Error(ErrorCode::kTooShort, "pitch window shorter than two periods of the floor");

  double local_peak = 0.0, mean = 0.0;
  for (double v : window) {
    local_peak = std::max(local_peak, std::abs(v));
    mean += v;
  }
  mean /= static_cast<double>(n);
  if (global_peak <= 0.0 || local_peak < config.silence_threshold * global_peak) return {};

  const auto min_lag = static_cast<std::size_t>(std::floor(sample_rate / config.ceiling));
  const auto max_lag = static_cast<std::size_t>(std::ceil(sample_rate / config.floor));
  const std::size_t nfft = acf_length(n, max_lag);

  thread_local Workspace ws;
  const auto& hann = [&]() -> const std::vector<double>& {
    thread_local std::map<std::size_t, std::vector<double>> windows;
    auto it = windows.find(n);
    if (it == windows.end()) it = windows.emplace(n, dsp::hann(n)).first;
    return it->second;
  }();
  ws.frame.resize(n);
  for (std::size_t i = 0; i < n; ++i) ws.frame[i] = (window[i] - mean) * hann[i];
  const std::size_t over = config.lag_oversampling;
  autocorrelation(ws.frame, nfft, over, ws);
  const double r0 = ws.acf[0];
  if (!(r0 > 0.0)) return {};
  const auto& rw = window_acf(n, nfft, over);

  // Lag-domain normalisation: divide by the window's own autocorrelation.
  auto r = [&](std::size_t m) { return ws.acf[m] / r0 / rw[m]; };

  const double lo_f = config.floor, hi_f = config.ceiling;
  double best_score = -1e300, best_r = 0.0, best_lag = 0.0;
  const std::size_t first = std::max<std::size_t>(over * min_lag, 2);
  const std::size_t last = over * std::min(max_lag, n - 2);
  for (std::size_t m = first; m <= last; ++m) {
    const double mid = r(m), left = r(m - 1), right = r(m + 1);
    if (!(mid > left && mid >= right)) continue;
    const auto vertex = dsp::parabolic_peak(left, mid, right);
    const double refined = (static_cast<double>(m) + vertex.offset) / static_cast<double>(over);
    const double f = sample_rate / refined;
    if (f < lo_f || f > hi_f) continue;
    const double score = vertex.value - config.octave_cost * std::log2(lo_f * refined / sample_rate);
    if (score > best_score) {
      best_score = score;
      best_r = vertex.value;
      best_lag = refined;
    }
  }
  if (best_lag == 0.0) return {};
  PitchEstimate est;
  est.strength = std::clamp(best_r, 0.0, 1.0);
  if (best_r >= config.voicing_threshold) est.f0 = sample_rate / best_lag;
  return est;
}

PitchTrack pitch_track(const AudioBuffer& buf, const PitchConfig& config, double step,
                       double grid_window) {
  config.validate(buf.sample_rate());
  const double analysis = config.window_seconds();
  const FrameSpec grid{step, std::max(analysis, grid_window)};
  const std::size_t count = frame_count(buf.size(), buf.sample_rate(), grid);
  if (count == 0) throw Error(ErrorCode::kTooShort, "audio is shorter than one pitch analysis window");

  const auto length = static_cast<std::size_t>(std::lround(analysis * buf.sample_rate()));
  const double global_peak = buf.peak();
  const auto all = buf.samples();
  PitchTrack track;
  track.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = 0.5 * grid.window + static_cast<double>(k) * step;
    std::ptrdiff_t start = window_start(t, buf.sample_rate(), length);
    start = std::clamp<std::ptrdiff_t>(start, 0, static_cast<std::ptrdiff_t>(all.size() - length));
    const auto est = frame_pitch(all.subspan(static_cast<std::size_t>(start), length), config,
                                 buf.sample_rate(), global_peak);
    track.push_back({t, est.f0, est.strength});
  }
  return track;
}

}  // namespace vt
