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
#include "vtimbre/features.hpp"

#include <algorithm>
#include <cmath>

#include "vtimbre/error.hpp"
#include "vtimbre/harmonics.hpp"

namespace vt {

namespace {

constexpr const char* kMeasureNames[kMeasureCount] = {
    "f0", "f1", "f2", "f3", "f4", "dispersion", "h1h2", "h2h4", "h4h2k", "h2k_h5k", "cpp", "rms", "shr"};

constexpr double kCovEpsilon = 1e-9;

}  // namespace

const char* measure_name(std::size_t measure) {
  return measure < kMeasureCount ? kMeasureNames[measure] : "?";
}

const std::vector<std::string>& acoustic_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const char* n : kMeasureNames) v.push_back(std::string(n) + "_mean");
    for (const char* n : kMeasureNames) v.push_back(std::string(n) + "_cov");
    return v;
  }();
  return names;
}

FrameTrack extract_track(const AudioBuffer& input, const ExtractionConfig& config) {
  if (input.empty()) throw Error(ErrorCode::kEmptyAudio, "empty audio buffer");
  const AudioBuffer buf = input.sample_rate() == kAnalysisRate ? input : resample(input, kAnalysisRate);
  const int rate = buf.sample_rate();
  const double grid_window = std::max(config.frames.window, config.pitch.window_seconds());
  const PitchTrack pitch = pitch_track(buf, config.pitch, config.frames.step, grid_window);

  FrameTrack track(pitch.size());
  const bool any_voiced = std::any_of(pitch.begin(), pitch.end(), [](const PitchFrame& p) { return p.f0.has_value(); });
  std::vector<double> formant_signal;
  if (any_voiced) formant_signal = prepare_formant_signal(buf, config.formants);

  const auto slice_len = static_cast<std::size_t>(std::lround(config.frames.window * rate));
  const auto all = buf.samples();
  for (std::size_t k = 0; k < pitch.size(); ++k) {
    TrackFrame& frame = track[k];
    frame.time = pitch[k].time;
    if (!pitch[k].f0) continue;
    frame.voiced = true;
    const double f0 = *pitch[k].f0;
    auto& v = frame.values;
    v[kF0] = f0;

    const FormantFrame formants =
        formant_frame_at(formant_signal, config.formants.analysis_rate(), frame.time, config.formants);
    for (int i = 1; i <= 4; ++i) {
      if (auto f = formants.get(i)) v[kF0 + static_cast<std::size_t>(i)] = f->frequency;
    }
    v[kDispersion] = dispersion(v[kF1], v[kF4]);

    std::ptrdiff_t start = window_start(frame.time, rate, slice_len);
    start = std::clamp<std::ptrdiff_t>(start, 0, static_cast<std::ptrdiff_t>(all.size() - slice_len));
    const auto slice = all.subspan(static_cast<std::size_t>(start), slice_len);
    const Spectrum spec = magnitude_spectrum(slice, rate);
    const TiltMeasures tilt = tilt_measures(spec, f0, formants);
    v[kH1H2] = tilt.h1h2;
    v[kH2H4] = tilt.h2h4;
    v[kH4H2k] = tilt.h4h2k;
    v[kH2kH5k] = tilt.h2k_h5k;
    v[kCpp] = cpp(slice, rate, config.cpp);
    v[kRms] = rms_energy(slice);
    v[kShr] = shr(spec, f0, config.shr);
  }
  return track;
}

double cov(std::span<const double> series) {
  if (series.empty()) throw Error(ErrorCode::kMissingFeature, "coefficient of variation of an empty series");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  double var = 0.0;
  for (double v : series) var += (v - mean) * (v - mean);
  var /= static_cast<double>(series.size());
  return std::sqrt(var) / (std::abs(mean) + kCovEpsilon);
}

double cov(std::span<const std::optional<double>> series) {
  std::vector<double> present;
  for (const auto& v : series)
    if (v) present.push_back(*v);
  return cov(present);
}

AcousticVector aggregate(const FrameTrack& track, std::size_t min_voiced_frames) {
  AcousticVector out;
  out.voiced_frames = static_cast<std::size_t>(
      std::count_if(track.begin(), track.end(), [](const TrackFrame& f) { return f.voiced; }));
  if (out.voiced_frames < min_voiced_frames || out.voiced_frames == 0)
    throw Error(ErrorCode::kSilentUtterance, "only " + std::to_string(out.voiced_frames) +
                                                 " voiced frames (need " + std::to_string(min_voiced_frames) + ")");
  std::vector<double> series;
  for (std::size_t m = 0; m < kMeasureCount; ++m) {
    series.clear();
    for (const auto& f : track)
      if (f.voiced && f.values[m]) series.push_back(*f.values[m]);
    if (series.empty())
      throw Error(ErrorCode::kMissingFeature, std::string("no voiced frame yields a value for ") + measure_name(m));
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    out.values[m] = mean;
    out.values[kMeasureCount + m] = cov(series);
  }
  return out;
}

FeatureKind parse_feature_kind(const std::string& name) {
  if (name == "acoustic") return FeatureKind::kAcoustic;
  if (name == "mfcc") return FeatureKind::kMfcc;
  if (name == "lfc") return FeatureKind::kLfc;
  throw Error(ErrorCode::kInvalidArgument, "unknown feature kind '" + name + "'");
}

const char* feature_kind_name(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kAcoustic: return "acoustic";
    case FeatureKind::kMfcc: return "mfcc";
    case FeatureKind::kLfc: return "lfc";
  }
  return "?";
}

std::size_t feature_dim(FeatureKind kind) {
  return kind == FeatureKind::kAcoustic ? kAcousticDim : kCepstralDim;
}

const std::vector<std::string>& feature_names(FeatureKind kind) {
  static const auto cepstral = [](const char* prefix) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < kCepstralDim; ++i) v.push_back(prefix + std::to_string(i));
    return v;
  };
  static const std::vector<std::string> mfcc_names = cepstral("mfcc_c");
  static const std::vector<std::string> lfc_names = cepstral("lfc_c");
  switch (kind) {
    case FeatureKind::kMfcc: return mfcc_names;
    case FeatureKind::kLfc: return lfc_names;
    default: return acoustic_feature_names();
  }
}

FeatureVector extract_features(const AudioBuffer& buf, FeatureKind kind, const ExtractionConfig& config) {
  FeatureVector row;
  if (kind == FeatureKind::kAcoustic) {
    const AcousticVector v = aggregate(extract_track(buf, config), config.min_voiced_frames);
    row.values.assign(v.values.begin(), v.values.end());
    row.voiced_frames = v.voiced_frames;
  } else {
    const auto x = buf.samples();
    if (std::all_of(x.begin(), x.end(), [](double s) { return s == 0.0; }))
      throw Error(ErrorCode::kSilentUtterance, "all-zero signal");
    const CepstralVector v = cepstral_features(buf, kind == FeatureKind::kMfcc ? FilterScale::kMel : FilterScale::kLinear, config.cepstral);
    row.values.assign(v.values.begin(), v.values.end());
    row.voiced_frames = v.frames;
  }
  return row;
}

}  // namespace vt
