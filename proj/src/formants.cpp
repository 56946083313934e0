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
#include "vtimbre/formants.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

void FormantConfig::validate() const {
  if (max_formants < 1) throw Error(ErrorCode::kInvalidArgument, "max_formants must be >= 1");
  if (!(ceiling > 100.0)) throw Error(ErrorCode::kInvalidArgument, "formant ceiling must exceed 100 Hz");
  if (!(window > 0.0)) throw Error(ErrorCode::kInvalidArgument, "formant window must be positive");
  if (!(max_bandwidth > 0.0)) throw Error(ErrorCode::kInvalidArgument, "max_bandwidth must be positive");
}

BurgResult burg(std::span<const double> x, int order) {
  if (order < 1) throw Error(ErrorCode::kInvalidArgument, "LPC order must be >= 1");
  const std::size_t n = x.size();
  const auto p = static_cast<std::size_t>(order);
  if (n <= p) throw Error(ErrorCode::kTooShort, "window must be longer than the LPC order");

  double energy = 0.0;
  for (double v : x) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "burg: non-finite sample");
    energy += v * v;
  }
  if (energy == 0.0) throw Error(ErrorCode::kDegenerate, "burg: window has no energy");

  // f: forward error, b: backward error (delayed by one inside the loop).
  std::vector<double> f(x.begin(), x.end()), b(x.begin(), x.end());
  std::vector<double> a(p + 1, 0.0), prev(p + 1, 0.0);
  a[0] = 1.0;
  BurgResult result;
  result.reflection.assign(p, 0.0);
  double err = energy / static_cast<double>(n);
  for (std::size_t m = 1; m <= p; ++m) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = m; i < n; ++i) {
      num += f[i] * b[i - 1];
      den += f[i] * f[i] + b[i - 1] * b[i - 1];
    }
    if (den <= 0.0) break;  // remaining coefficients stay zero
    const double k = -2.0 * num / den;
    result.reflection[m - 1] = k;
    prev = a;
    for (std::size_t j = 1; j <= m; ++j) a[j] = prev[j] + k * prev[m - j];
    // Update from the top so b[i - 1] still holds the previous stage.
    for (std::size_t i = n - 1; i >= m; --i) {
      const double fi = f[i];
      f[i] = fi + k * b[i - 1];
      b[i] = b[i - 1] + k * fi;
    }
    err *= 1.0 - k * k;
  }
  result.coefficients.assign(a.begin() + 1, a.end());
  result.error = err;
  return result;
}

std::vector<std::complex<double>> lpc_roots(std::span<const double> a) {
  const auto p = static_cast<Eigen::Index>(a.size());
  for (double v : a)
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite LPC coefficient");
  if (p == 0) return {};
  // Strip trailing zeros: each contributes a root at the origin.
  Eigen::Index degree = p;
  while (degree > 0 && a[static_cast<std::size_t>(degree - 1)] == 0.0) --degree;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(p - degree), {0.0, 0.0});
  if (degree == 0) return roots;
  // Coefficients in increasing powers of z.
  Eigen::VectorXd poly(degree + 1);
  for (Eigen::Index i = 0; i < degree; ++i) poly[i] = a[static_cast<std::size_t>(degree - 1 - i)];
  poly[degree] = 1.0;
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
  solver.compute(poly);
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) {
    const auto r = solver.roots()[i];
    if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
      throw Error(ErrorCode::kInternal, "root finding failed");
    roots.push_back(r);
  }
  return roots;
}

FormantFrame roots_to_formants(std::span<const double> coefficients, double rate,
                               const FormantConfig& config) {
  FormantFrame frame;
  for (auto z : lpc_roots(coefficients)) {
    if (z.imag() <= 0.0) continue;
    double radius = std::abs(z);
    if (radius > 1.0) radius = 1.0 / radius;  // reflect into the unit circle
    if (radius <= 0.0) continue;
    const double freq = std::arg(z) * rate / (2.0 * dsp::kPi);
    const double bw = -std::log(radius) * rate / dsp::kPi;
    if (freq <= 50.0 || freq >= config.ceiling - 50.0) continue;
    if (!(bw > 0.0) || bw >= config.max_bandwidth) continue;
    frame.formants.push_back({freq, bw});
  }
  std::sort(frame.formants.begin(), frame.formants.end(),
            [](const Formant& l, const Formant& r) { return l.frequency < r.frequency; });
  // Keep strict ordering and the configured cap.
  frame.formants.erase(std::unique(frame.formants.begin(), frame.formants.end(),
                                   [](const Formant& l, const Formant& r) {
                                     return l.frequency == r.frequency;
                                   }),
                       frame.formants.end());
  if (frame.formants.size() > static_cast<std::size_t>(config.max_formants))
    frame.formants.resize(static_cast<std::size_t>(config.max_formants));
  return frame;
}

std::vector<double> prepare_formant_signal(const AudioBuffer& buf, const FormantConfig& config) {
  config.validate();
  const auto rate = static_cast<int>(std::lround(config.analysis_rate()));
  const AudioBuffer low = resample(buf, rate);
  const auto s = low.samples();
  std::vector<double> y(s.size());
  const double alpha = std::exp(-2.0 * dsp::kPi * config.pre_emphasis_from / rate);
  for (std::size_t i = s.size(); i-- > 0;) y[i] = s[i] - (i > 0 ? alpha * s[i - 1] : 0.0);
  return y;
}

FormantFrame formant_frame_at(std::span<const double> x, double rate, double t,
                              const FormantConfig& config) {
  const auto length = static_cast<std::size_t>(std::lround(config.physical_window() * rate));
  thread_local std::map<std::size_t, std::vector<double>> windows;
  auto it = windows.find(length);
  if (it == windows.end()) it = windows.emplace(length, dsp::gaussian(length)).first;
  const auto& w = it->second;

  // Samples outside the signal count as zeros.
  const auto start = static_cast<std::ptrdiff_t>(std::lround(t * rate - 0.5 * static_cast<double>(length)));
  thread_local std::vector<double> frame;
  frame.assign(length, 0.0);
  for (std::size_t i = 0; i < length; ++i) {
    const std::ptrdiff_t j = start + static_cast<std::ptrdiff_t>(i);
    if (j >= 0 && j < static_cast<std::ptrdiff_t>(x.size())) frame[i] = x[static_cast<std::size_t>(j)] * w[i];
  }
  if (length <= static_cast<std::size_t>(config.lpc_order())) return {};
  double energy = 0.0;
  for (double v : frame) energy += v * v;
  if (energy == 0.0) return {};
  const BurgResult lpc = burg(frame, config.lpc_order());
  return roots_to_formants(lpc.coefficients, rate, config);
}

std::vector<FormantFrame> formant_track(const AudioBuffer& buf, const FormantConfig& config,
                                        double step, double grid_window) {
  config.validate();
  const FrameSpec grid{step, std::max(grid_window, config.physical_window())};
  const std::size_t count = frame_count(buf.size(), buf.sample_rate(), grid);
  if (count == 0) throw Error(ErrorCode::kTooShort, "audio is shorter than one formant analysis window");
  const auto emphasised = prepare_formant_signal(buf, config);
  std::vector<FormantFrame> track;
  track.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = 0.5 * grid.window + static_cast<double>(k) * step;
    track.push_back(formant_frame_at(emphasised, config.analysis_rate(), t, config));
  }
  return track;
}

std::optional<double> dispersion(std::optional<double> f1, std::optional<double> f4) {
  if (!f1 || !f4) return std::nullopt;
  return (*f4 - *f1) / 3.0;
}

}  // namespace vt
