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
#include "vtimbre/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dsp.hpp"
#include "vtimbre/error.hpp"

namespace vt {

double accuracy(std::span<const ScoredPair> scored, double threshold) {
  if (scored.empty()) throw Error(ErrorCode::kInvalidArgument, "accuracy of an empty list");
  std::size_t correct = 0;
  for (const auto& s : scored) correct += (s.score >= threshold) == (s.label == Label::kBStronger);
  return 100.0 * static_cast<double>(correct) / static_cast<double>(scored.size());
}

EerResult eer_curve(std::span<const ScoredPair> scored) {
  std::vector<double> pos, neg;
  for (const auto& s : scored) {
    if (!std::isfinite(s.score)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
    (s.label == Label::kBStronger ? pos : neg).push_back(s.score);
  }
  if (pos.empty() || neg.empty()) throw Error(ErrorCode::kSingleClass, "EER needs both labels");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size() + 1);
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  EerResult r;
  const auto np = static_cast<double>(pos.size()), nn = static_cast<double>(neg.size());
  for (double t : thresholds) {
    const auto below_pos = static_cast<double>(std::lower_bound(pos.begin(), pos.end(), t) - pos.begin());
    const auto below_neg = static_cast<double>(std::lower_bound(neg.begin(), neg.end(), t) - neg.begin());
    r.curve.push_back({t, (nn - below_neg) / nn, below_pos / np});
  }
  // FAR falls and FRR rises with the threshold; the first point where FAR
  // no longer exceeds FRR closes the crossing interval.
  for (std::size_t i = 0; i < r.curve.size(); ++i) {
    const double d = r.curve[i].far - r.curve[i].frr;
    if (d > 0.0) continue;
    if (d == 0.0 || i == 0) {
      r.eer = 100.0 * r.curve[i].far;
      r.threshold = r.curve[i].threshold;
    } else {
      const auto& a = r.curve[i - 1];
      const auto& b = r.curve[i];
      const double da = a.far - a.frr;
      const double alpha = da / (da - d);
      r.eer = 100.0 * (a.far + alpha * (b.far - a.far));
      r.threshold = std::isfinite(b.threshold) ? a.threshold + alpha * (b.threshold - a.threshold) : a.threshold;
    }
    break;
  }
  return r;
}

EvalReport evaluate(std::span<const ScoredPair> scored, double threshold) {
  EvalReport report;
  report.pairs = scored.size();
  report.accuracy = accuracy(scored, threshold);
  try {
    const EerResult e = eer_curve(scored);
    report.eer = e.eer;
    report.eer_threshold = e.threshold;
    report.curve = e.curve;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingleClass) throw;
    report.warnings.push_back("EER is undefined: the test set holds a single label class");
  }
  std::map<std::string, std::vector<ScoredPair>> by_descriptor;
  for (const auto& s : scored) by_descriptor[s.descriptor].push_back(s);
  for (const auto& [name, subset] : by_descriptor) {
    DescriptorReport d;
    d.descriptor = name;
    d.pairs = subset.size();
    d.b_labels = static_cast<std::size_t>(std::count_if(
        subset.begin(), subset.end(), [](const ScoredPair& s) { return s.label == Label::kBStronger; }));
    d.accuracy = accuracy(subset, threshold);
    if (d.b_labels > 0 && d.b_labels < d.pairs)
      d.eer = eer(subset);
    else
      report.warnings.push_back("EER is undefined for descriptor '" + name + "': all its pairs carry label " +
                                (d.b_labels ? "B" : "A"));
    report.descriptors.push_back(d);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Cost accounting

namespace {

// Real-input transform of length n, computed as a complex transform of
// length n / 2 plus a split pass.
double real_fft_flops(std::size_t n) {
  const double h = 0.5 * static_cast<double>(n);
  return 5.0 * h * std::log2(h) + 5.0 * static_cast<double>(n);
}

std::size_t band_bins(double width_hz, double bin_hz) {
  return static_cast<std::size_t>(std::floor(width_hz / bin_hz)) + 1;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f", v);
  return buf;
}

void add(CostReport& r, const std::string& stage, double flops, const std::string& formula) {
  r.extraction_items.push_back({stage, flops, formula});
  r.extraction_flops_per_second += flops;
}

void acoustic_cost(CostReport& r, const ExtractionConfig& cfg) {
  const double rate = kAnalysisRate;
  const PitchConfig& pc = cfg.pitch;
  const double grid_window = std::max(cfg.frames.window, pc.window_seconds());
  FrameSpec grid = cfg.frames;
  grid.window = grid_window;
  const auto frames = static_cast<double>(frame_count(kAnalysisRate, kAnalysisRate, grid));

  // Pitch.
  {
    const auto n = static_cast<std::size_t>(std::lround(pc.window_seconds() * rate));
    const auto max_lag = static_cast<std::size_t>(std::ceil(rate / pc.floor));
    const auto min_lag = static_cast<std::size_t>(std::floor(rate / pc.ceiling));
    const std::size_t nfft = std::max<std::size_t>(4, dsp::next_pow2(n + max_lag + 1));
    const std::size_t over = pc.lag_oversampling;
    const double lags = static_cast<double>(over * (std::min(max_lag, n - 2) - min_lag + 1));
    const double nd = static_cast<double>(n);
    const double per = 5.0 * nd + real_fft_flops(nfft) + 3.0 * static_cast<double>(nfft / 2 + 1) +
                       real_fft_flops(over * nfft) + 8.0 * lags + 10.0 * lags;
    add(r, "pitch", frames * per,
        "frames x (5n + rfft(" + std::to_string(nfft) + ") + 3(nfft/2+1) + rfft(" + std::to_string(over * nfft) +
            ") + 18 L), n=" + std::to_string(n) + ", L=" + fmt(lags));
  }
  // Formants: one resample to the LPC rate, pre-emphasis, then per frame.
  {
    const FormantConfig& fc = cfg.formants;
    const int low_rate = static_cast<int>(std::lround(fc.analysis_rate()));
    const auto taps = static_cast<double>(resample_taps(kAnalysisRate, low_rate));
    add(r, "formant resample", 2.0 * taps * low_rate + 2.0 * low_rate,
        "2 x taps x rate + pre-emphasis, taps=" + fmt(taps));
    const double len = std::round(fc.physical_window() * low_rate);
    const double p = fc.lpc_order();
    double burg = 3.0 * len;  // window, energy
    for (double m = 1; m <= p; ++m) burg += 9.0 * (len - m) + 2.0 * m + 6.0;
    const double roots = 10.0 * p * p * p + 10.0 * p;
    add(r, "formants", frames * (burg + roots),
        "frames x (3N + sum_m [9(N-m) + 2m + 6] + 10p^3 + 10p), N=" + fmt(len) + ", p=" + fmt(p));
  }
  // Magnitude spectrum of the slice, shared by tilt and SHR.
  const auto slice = static_cast<std::size_t>(std::lround(cfg.frames.window * rate));
  const std::size_t spec_fft = std::max<std::size_t>(4, dsp::next_pow2(4 * slice));
  const double bin_hz = rate / static_cast<double>(spec_fft);
  add(r, "spectrum", frames * (static_cast<double>(slice) + real_fft_flops(spec_fft) +
                               4.0 * static_cast<double>(spec_fft / 2 + 1)),
      "frames x (n + rfft(" + std::to_string(spec_fft) + ") + 4(nfft/2+1))");
  // Peak bands are widest at the pitch ceiling.
  const double f0 = pc.ceiling;
  {
    const double band = static_cast<double>(band_bins(0.5 * f0, bin_hz));
    const double per = 5.0 * (2.0 * band + 1.0) + 9.0 * 20.0 + 4.0;
    add(r, "tilt", frames * per, "frames x (5 bands x (2b + 1) + 9 corrections x 20 + 4), b=" + fmt(band));
  }
  {
    const double k = std::min<double>(cfg.shr.harmonic_count_max, std::floor(0.5 * rate / f0));
    const double band = static_cast<double>(band_bins(0.25 * f0, bin_hz));
    const double per = 2.0 * k * (2.0 * band + 1.0) + 3.0;
    add(r, "shr", frames * per, "frames x (2K x (2b + 1) + 3), K=" + fmt(k) + ", b=" + fmt(band));
  }
  {
    const std::size_t nfft = std::max<std::size_t>(4, dsp::next_pow2(slice));
    const double half = static_cast<double>(nfft / 2 + 1);
    const double search = std::floor(cfg.cpp.quefrency_ceiling * rate) - std::ceil(cfg.cpp.quefrency_floor * rate) + 1;
    const double trend = std::floor(cfg.cpp.trend_to * rate) - std::ceil(cfg.cpp.trend_from * rate) + 1;
    const double per = static_cast<double>(slice) + 2.0 * real_fft_flops(nfft) + 7.0 * half +
                       2.0 * static_cast<double>(nfft) + search + 10.0 + 4.0 * trend + 15.0;
    add(r, "cpp", frames * per, "frames x (n + 2 rfft(" + std::to_string(nfft) + ") + 7(nfft/2+1) + 2 nfft + Q + 4T + 25)");
  }
  add(r, "rms", frames * (2.0 * static_cast<double>(slice) + 1.0), "frames x (2n + 1)");
  add(r, "aggregate", static_cast<double>(kMeasureCount) * (4.0 * frames + 4.0), "13 x (4 frames + 4)");
}

void cepstral_cost(CostReport& r, FilterScale scale, const CepstralConfig& cfg) {
  const auto frames =
      static_cast<double>(frame_count(kAnalysisRate, kAnalysisRate, FrameSpec{cfg.hop, cfg.window}));
  const auto n = static_cast<std::size_t>(std::lround(cfg.window * kAnalysisRate));
  const std::size_t nfft = std::max<std::size_t>(4, dsp::next_pow2(n));
  std::size_t nnz = 0;
  for (const auto& f : triangular_filterbank(scale, nfft, kAnalysisRate, cfg)) nnz += f.weights.size();
  const double m = static_cast<double>(cfg.filters), c = static_cast<double>(cfg.coefficients);
  add(r, "stft", frames * (static_cast<double>(n) + real_fft_flops(nfft) + 3.0 * static_cast<double>(nfft / 2 + 1)),
      "frames x (n + rfft(" + std::to_string(nfft) + ") + 3(nfft/2+1))");
  add(r, "filterbank", frames * (2.0 * static_cast<double>(nnz) + m),
      "frames x (2 nnz + log per filter), nnz=" + std::to_string(nnz));
  add(r, "dct", frames * (2.0 * m * c + c) + c, "frames x (2MC + C) + C");
}

}  // namespace

ClassifierShape classifier_shape(const DiffNetModel& model) {
  return {model.feature_dim(), model.hidden(), model.outputs()};
}

CostReport cost_report(FeatureKind kind, const ExtractionConfig& extraction, const ClassifierShape& shape) {
  if (shape.feature_dim == 0 || shape.hidden == 0 || shape.outputs == 0)
    throw Error(ErrorCode::kInvalidArgument, "classifier dimensions must be positive");
  CostReport r;
  r.feature_kind = feature_kind_name(kind);
  r.dim_per_utterance = feature_dim(kind);
  r.extraction_params = 0;
  r.conventions = {
      "multiplies, adds, comparisons and transcendental calls count one flop each",
      "complex FFT of length n: 5 n log2 n; a real FFT of length n runs as a complex FFT of length n/2 plus a "
      "5n split pass",
      "extraction counted for one second of 16 kHz input with every frame voiced",
      "peak-search bands sized at the pitch ceiling; polynomial roots at 10 p^3",
      "classifier: dense in->out = 2 in out + out; BN at inference 4 per unit; sigmoid 3 per output"};
  if (kind == FeatureKind::kAcoustic)
    acoustic_cost(r, extraction);
  else
    cepstral_cost(r, kind == FeatureKind::kMfcc ? FilterScale::kMel : FilterScale::kLinear, extraction.cepstral);

  const auto d = static_cast<double>(shape.feature_dim), h = static_cast<double>(shape.hidden),
             n = static_cast<double>(shape.outputs);
  r.classifier_params = shape.feature_dim + 2 * shape.feature_dim * shape.hidden + 3 * shape.hidden +
                        shape.hidden * shape.outputs + shape.outputs;
  auto cls = [&](const std::string& stage, double flops, const std::string& formula) {
    r.classifier_items.push_back({stage, flops, formula});
    r.classifier_flops_per_pair += flops;
  };
  cls("gain", 2.0 * d, "2D");
  cls("fc1", 2.0 * (2.0 * d) * h + h, "2 (2D) H + H");
  cls("batchnorm", 4.0 * h, "4H");
  cls("relu", h, "H");
  cls("fc2", 2.0 * h * n + n, "2HN + N");
  cls("sigmoid", 3.0 * n, "3N");
  return r;
}

}  // namespace vt
