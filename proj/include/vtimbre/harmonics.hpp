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
// Harmonic amplitudes, formant-corrected spectral tilt, RMS energy.

#ifndef VTIMBRE_HARMONICS_HPP_
#define VTIMBRE_HARMONICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "vtimbre/formants.hpp"

namespace vt {

// One-sided magnitude spectrum, bins 0 .. fft_size/2. Magnitudes are the
// raw DFT moduli of the Hann-windowed slice (no 1/N scaling), so a unit
// sine reads 0.5 * sum(window).
struct Spectrum {
  std::vector<double> magnitudes;
  std::size_t window_length = 0;
  std::size_t fft_size = 0;
  int sample_rate = 0;

  double bin_hz() const { return static_cast<double>(sample_rate) / static_cast<double>(fft_size); }
  double nyquist() const { return 0.5 * sample_rate; }
};

// Hann window, zero padded to the next power of two >= 4 * window length.
Spectrum magnitude_spectrum(std::span<const double> window, int sample_rate);

// 20 log10 of the largest magnitude within +-f0/4 of the harmonic of f0
// nearest `target`. Empty when target lies outside (0, Nyquist) or the
// search band holds no bins.
std::optional<double> harmonic_amplitude(const Spectrum& spec, double target, double f0);

// Gain in dB that a formant resonator adds at `freq`, relative to DC.
double formant_gain_db(double freq, const Formant& formant, double sample_rate);

// Subtracts the gain of F1..F_count from `amp_db`. Empty when any of
// F1..F_required is missing; F_(required+1)..F_count are used if present.
std::optional<double> formant_correction(double amp_db, double freq, const FormantFrame& formants,
                                         int count, int required, double sample_rate);

struct TiltMeasures {
  std::optional<double> h1h2;     // H1* - H2*
  std::optional<double> h2h4;     // H2* - H4*
  std::optional<double> h4h2k;    // H4* - H2kHz*
  std::optional<double> h2k_h5k;  // H2kHz* - H5kHz (H5kHz uncorrected)
};

// H1*, H2*, H4* are corrected with F1 and F2, H2kHz* with F1..F3 (F3 when
// present). Passing no formant frame skips correction entirely.
TiltMeasures tilt_measures(const Spectrum& spec, double f0, const std::optional<FormantFrame>& formants);

// Root mean square of the raw samples.
double rms_energy(std::span<const double> window);

}  // namespace vt

#endif  // VTIMBRE_HARMONICS_HPP_
