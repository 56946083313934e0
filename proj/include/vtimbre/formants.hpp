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
// Formant frequencies and bandwidths from Burg LPC.

#ifndef VTIMBRE_FORMANTS_HPP_
#define VTIMBRE_FORMANTS_HPP_

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "vtimbre/audio.hpp"

namespace vt {

struct Formant {
  double frequency = 0.0;  // Hz
  double bandwidth = 0.0;  // Hz
};

// Ascending by frequency; entry 0 is F1.
struct FormantFrame {
  std::vector<Formant> formants;

  // 1-based: get(1) is F1. Empty when fewer formants were found.
  std::optional<Formant> get(int index) const {
    if (index < 1 || static_cast<std::size_t>(index) > formants.size()) return std::nullopt;
    return formants[static_cast<std::size_t>(index - 1)];
  }
};

struct FormantConfig {
  int max_formants = 5;
  double ceiling = 5500.0;          // Hz; the signal is resampled to 2 * ceiling
  double pre_emphasis_from = 50.0;  // Hz
  // Effective duration of the Gaussian window; the window itself spans
  // twice this, as in Praat.
  double window = 0.025;
  double max_bandwidth = 700.0;     // Hz; broader poles are discarded

  int lpc_order() const { return 2 * max_formants; }
  double analysis_rate() const { return 2.0 * ceiling; }
  double physical_window() const { return 2.0 * window; }
  void validate() const;
};

struct BurgResult {
  // a_1..a_p of A(z) = 1 + sum a_k z^-k.
  std::vector<double> coefficients;
  std::vector<double> reflection;
  double error = 0.0;  // mean squared forward/backward prediction error
};

// Throws kDegenerate for a window with no energy and kTooShort when the
// window is not longer than the order.
BurgResult burg(std::span<const double> window, int order);

// Roots of z^p + a_1 z^(p-1) + ... + a_p.
std::vector<std::complex<double>> lpc_roots(std::span<const double> coefficients);

// Pole pairs in the upper half plane become (frequency, bandwidth); poles
// outside 50 Hz .. ceiling - 50 Hz or broader than max_bandwidth are dropped.
FormantFrame roots_to_formants(std::span<const double> coefficients, double analysis_rate,
                               const FormantConfig& config);

// One frame per `step`, centred like frame_slices() for a window of
// max(grid_window, physical_window()).
std::vector<FormantFrame> formant_track(const AudioBuffer& buf, const FormantConfig& config,
                                        double step, double grid_window);

// Formant frame for a window of already resampled, pre-emphasised samples
// centred at `t`.
FormantFrame formant_frame_at(std::span<const double> emphasised, double rate, double t,
                              const FormantConfig& config);

// Resampled to the analysis rate and pre-emphasised.
std::vector<double> prepare_formant_signal(const AudioBuffer& buf, const FormantConfig& config);

// (F4 - F1) / 3; empty if either input is missing.
std::optional<double> dispersion(std::optional<double> f1, std::optional<double> f4);

}  // namespace vt

#endif  // VTIMBRE_FORMANTS_HPP_
