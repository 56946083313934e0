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
#include "dsp.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/FFT>

#include "vtimbre/error.hpp"

namespace vt::dsp {

namespace {

// Eigen's FFT object caches plans and scratch buffers, so give each thread
// its own.
Eigen::FFT<double>& thread_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    return f;
  }();
  return fft;
}

}  // namespace

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n));
  return w;
}

std::vector<double> gaussian(std::size_t n) {
  std::vector<double> w(n);
  const double mid = 0.5 * static_cast<double>(n + 1);
  const double edge = std::exp(-12.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i + 1) - mid) / static_cast<double>(n + 1);
    w[i] = (std::exp(-48.0 * x * x) - edge) / (1.0 - edge);
  }
  return w;
}

void rfft(std::span<const double> in, std::size_t nfft,
          std::vector<std::complex<double>>& out) {
  if (nfft % 4 != 0 || in.size() > nfft)
    throw Error(ErrorCode::kInternal, "rfft: bad transform length");
  thread_local std::vector<double> padded;
  padded.assign(nfft, 0.0);
  std::copy(in.begin(), in.end(), padded.begin());
  out.resize(nfft / 2 + 1);
  thread_fft().fwd(out.data(), padded.data(), static_cast<Eigen::Index>(nfft));
}

void irfft(std::span<const std::complex<double>> half, std::size_t nfft,
           std::vector<double>& out) {
  if (nfft % 4 != 0 || half.size() != nfft / 2 + 1)
    throw Error(ErrorCode::kInternal, "irfft: bad transform length");
  out.resize(nfft);
  thread_fft().inv(out.data(), half.data(), static_cast<Eigen::Index>(nfft));
}

Vertex parabolic_peak(double left, double mid, double right) {
  const double denom = left - 2.0 * mid + right;
  if (denom >= 0.0) return {0.0, mid};  // not a strict maximum
  double offset = 0.5 * (left - right) / denom;
  offset = std::clamp(offset, -0.5, 0.5);
  return {offset, mid - 0.25 * (left - right) * offset};
}

}  // namespace vt::dsp
