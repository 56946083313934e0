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
// Cepstral peak prominence and subharmonic-to-harmonic ratio.

#ifndef VTIMBRE_NOISE_METRICS_HPP_
#define VTIMBRE_NOISE_METRICS_HPP_

#include <span>

#include "vtimbre/harmonics.hpp"

namespace vt {

struct CppConfig {
  double quefrency_floor = 1.0 / 500.0;   // s; peak search range start
  double quefrency_ceiling = 1.0 / 60.0;  // s; peak search range end
  double trend_from = 0.001;              // s; regression range start
  double trend_to = 1.0 / 60.0;           // s; regression range end
  // Width of the moving average applied to the power cepstrum before the
  // dB conversion; 0 disables it.
  double quefrency_smoothing = 0.0;
};

struct CppResult {
  double prominence = 0.0;  // dB above the regression line
  double quefrency = 0.0;   // s, interpolated peak location
};

// Power cepstrum of the Hann-windowed slice, peak refined by a parabola,
// least-squares trend line on the dB cepstrum.
CppResult cepstral_peak(std::span<const double> window, int sample_rate, const CppConfig& config = {});

inline double cpp(std::span<const double> window, int sample_rate, const CppConfig& config = {}) {
  return cepstral_peak(window, sample_rate, config).prominence;
}

struct ShrConfig {
  int harmonic_count_max = 10;
  double floor_db = -30.0;
};

// 20 log10(sum of subharmonic peaks / sum of harmonic peaks), clamped below
// at floor_db. Peaks are taken within +-f0/8 of k*f0 and (k - 1/2)*f0.
double shr(const Spectrum& spec, double f0, const ShrConfig& config = {});

}  // namespace vt

#endif  // VTIMBRE_NOISE_METRICS_HPP_
