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
// Autocorrelation F0 estimation with a frame-local voicing decision.

#ifndef VTIMBRE_PITCH_HPP_
#define VTIMBRE_PITCH_HPP_

#include <optional>
#include <span>
#include <vector>

#include "vtimbre/audio.hpp"

namespace vt {

struct PitchConfig {
  double floor = 75.0;             // Hz
  double ceiling = 600.0;          // Hz
  double voicing_threshold = 0.45; // on the normalised autocorrelation peak
  double silence_threshold = 0.03; // fraction of the buffer's global peak
  // Candidate score is r - octave_cost * log2(floor * lag); favours the
  // shorter of two equally strong lags.
  double octave_cost = 0.1;
  // Autocorrelation is evaluated on a lag grid this many times finer than
  // the sample period before the parabolic refinement.
  std::size_t lag_oversampling = 2;

  // Pitch analysis window: three periods of the floor frequency.
  double window_seconds() const { return 3.0 / floor; }
  void validate(int sample_rate) const;
};

struct PitchEstimate {
  std::optional<double> f0;  // empty when unvoiced
  double strength = 0.0;     // [0, 1]
};

struct PitchFrame {
  double time = 0.0;
  std::optional<double> f0;
  double strength = 0.0;
};

using PitchTrack = std::vector<PitchFrame>;

// One analysis window. The window must span at least two periods of the
// floor frequency. `global_peak` is the absolute peak of the whole signal.
PitchEstimate frame_pitch(std::span<const double> window, const PitchConfig& config,
                          int sample_rate, double global_peak);

// One estimate per `step` seconds. Frame centres follow the same grid as
// frame_slices() for a window of max(grid_window, config.window_seconds()).
PitchTrack pitch_track(const AudioBuffer& buf, const PitchConfig& config, double step,
                       double grid_window = 0.0);

}  // namespace vt

#endif  // VTIMBRE_PITCH_HPP_
