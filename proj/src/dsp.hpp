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
// Private numeric helpers shared by the analysis modules.

#ifndef VTIMBRE_SRC_DSP_HPP_
#define VTIMBRE_SRC_DSP_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vt::dsp {

inline constexpr double kPi = 3.14159265358979323846;

std::size_t next_pow2(std::size_t n);

// Periodic Hann: 0.5 - 0.5 cos(2 pi n / N).
std::vector<double> hann(std::size_t n);

// Gaussian bell that reaches zero at both edges, shaped like the window
// commonly used for LPC formant analysis.
std::vector<double> gaussian(std::size_t n);

// Real FFT of `in` zero-padded to `nfft` (a multiple of 4). Output holds
// nfft/2 + 1 bins, unscaled.
void rfft(std::span<const double> in, std::size_t nfft,
          std::vector<std::complex<double>>& out);

// Inverse of rfft(); `half` has nfft/2 + 1 bins. Output is scaled by 1/nfft.
void irfft(std::span<const std::complex<double>> half, std::size_t nfft,
           std::vector<double>& out);

// Vertex offset in (-0.5, 0.5) and height of the parabola through three
// equally spaced points centred on `mid`.
struct Vertex {
  double offset;
  double value;
};
Vertex parabolic_peak(double left, double mid, double right);

}  // namespace vt::dsp

#endif  // VTIMBRE_SRC_DSP_HPP_
