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
// Utterance-level feature vectors: the 26-dimensional acoustic parameter
// set (13 per-frame measures, their means and coefficients of variation)
// and the 13-dimensional MFCC / LFC baselines.

#ifndef VTIMBRE_FEATURES_HPP_
#define VTIMBRE_FEATURES_HPP_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vtimbre/audio.hpp"
#include "vtimbre/formants.hpp"
#include "vtimbre/noise_metrics.hpp"
#include "vtimbre/pitch.hpp"

namespace vt {

// Per-frame measures in canonical order. Do not reorder: feature files and
// checkpoints depend on it.
enum Measure : std::size_t {
  kF0 = 0,
  kF1,
  kF2,
  kF3,
  kF4,
  kDispersion,
  kH1H2,
  kH2H4,
  kH4H2k,
  kH2kH5k,
  kCpp,
  kRms,
  kShr,
  kMeasureCount
};

inline constexpr std::size_t kAcousticDim = 2 * kMeasureCount;  // 26
inline constexpr std::size_t kCepstralDim = 13;

// "f0", "f1", ..., "shr".
const char* measure_name(std::size_t measure);

// "f0_mean" .. "shr_mean", then "f0_cov" .. "shr_cov".
const std::vector<std::string>& acoustic_feature_names();

struct TrackFrame {
  double time = 0.0;
  bool voiced = false;
  std::array<std::optional<double>, kMeasureCount> values{};
};

using FrameTrack = std::vector<TrackFrame>;

struct CepstralConfig {
  double window = 0.025;
  double hop = 0.010;
  std::size_t filters = 26;
  std::size_t coefficients = kCepstralDim;
  double low_hz = 0.0;
  double high_hz = 8000.0;
  double log_floor = 1e-10;
};

struct ExtractionConfig {
  FrameSpec frames;  // 10 ms step, 40 ms spectral slice
  PitchConfig pitch;
  FormantConfig formants;
  CppConfig cpp;
  ShrConfig shr;
  CepstralConfig cepstral;  // mfcc and lfc only
  std::size_t min_voiced_frames = 10;
};

// Runs the pitch tracker on the 10 ms grid and, for every voiced frame,
// measures formants, dispersion, tilt, RMS, CPP and SHR on the slice
// centred at the frame. Unvoiced frames carry no values. Buffers at other
// rates are resampled to kAnalysisRate first.
FrameTrack extract_track(const AudioBuffer& buf, const ExtractionConfig& config = {});

// Population standard deviation over |mean| + 1e-9. Missing values are
// skipped; throws kMissingFeature if nothing is left.
double cov(std::span<const std::optional<double>> series);
double cov(std::span<const double> series);

struct AcousticVector {
  std::array<double, kAcousticDim> values{};
  std::size_t voiced_frames = 0;
};

// Throws kSilentUtterance below min_voiced_frames voiced frames and
// kMissingFeature when a measure has no value in any voiced frame.
AcousticVector aggregate(const FrameTrack& track, std::size_t min_voiced_frames = 10);

struct CepstralVector {
  std::array<double, kCepstralDim> values{};
  std::size_t frames = 0;
};

enum class FilterScale { kMel, kLinear };

// Triangular filters stored sparsely: weights cover bins first .. first + n - 1.
struct TriangularFilter {
  std::size_t first_bin = 0;
  std::vector<double> weights;
};
std::vector<TriangularFilter> triangular_filterbank(FilterScale scale, std::size_t fft_size, int sample_rate,
                                                    const CepstralConfig& config);

CepstralVector cepstral_features(const AudioBuffer& buf, FilterScale scale, const CepstralConfig& config = {});
inline CepstralVector mfcc(const AudioBuffer& buf, const CepstralConfig& config = {}) {
  return cepstral_features(buf, FilterScale::kMel, config);
}
inline CepstralVector lfc(const AudioBuffer& buf, const CepstralConfig& config = {}) {
  return cepstral_features(buf, FilterScale::kLinear, config);
}

enum class FeatureKind { kAcoustic, kMfcc, kLfc };
FeatureKind parse_feature_kind(const std::string& name);
const char* feature_kind_name(FeatureKind kind);
std::size_t feature_dim(FeatureKind kind);
const std::vector<std::string>& feature_names(FeatureKind kind);

// A row of a feature file.
struct FeatureVector {
  std::string id;
  std::vector<double> values;
  std::size_t voiced_frames = 0;
};

FeatureVector extract_features(const AudioBuffer& buf, FeatureKind kind, const ExtractionConfig& config = {});

}  // namespace vt

#endif  // VTIMBRE_FEATURES_HPP_
