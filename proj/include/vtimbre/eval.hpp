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
// Accuracy, equal error rate and the analytical cost reporter.

#ifndef VTIMBRE_EVAL_HPP_
#define VTIMBRE_EVAL_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vtimbre/diffnet.hpp"
#include "vtimbre/features.hpp"

namespace vt {

struct ScoredPair {
  Label label = Label::kAStronger;
  double score = 0.5;
  std::string descriptor;
};

// Percent of pairs where score >= threshold coincides with B being stronger.
double accuracy(std::span<const ScoredPair> scored, double threshold = 0.5);

struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of A-labelled pairs scored >= threshold
  double frr = 0.0;  // fraction of B-labelled pairs scored < threshold
};

struct EerResult {
  double eer = 0.0;        // percent
  double threshold = 0.0;  // interpolated crossing threshold
  std::vector<DetPoint> curve;
};

// B-stronger is the positive class. Thresholds sweep the distinct scores
// and +inf; the rate at the FAR/FRR crossing is linearly interpolated.
// Throws kSingleClass unless both labels occur.
EerResult eer_curve(std::span<const ScoredPair> scored);
inline double eer(std::span<const ScoredPair> scored) { return eer_curve(scored).eer; }

struct DescriptorReport {
  std::string descriptor;
  std::size_t pairs = 0;
  std::size_t b_labels = 0;
  double accuracy = 0.0;
  std::optional<double> eer;  // empty for a single-class subset
};

struct EvalReport {
  std::size_t pairs = 0;
  double accuracy = 0.0;
  std::optional<double> eer;
  std::optional<double> eer_threshold;
  std::vector<DetPoint> curve;
  std::vector<DescriptorReport> descriptors;  // sorted by name
  std::vector<std::string> warnings;
};

EvalReport evaluate(std::span<const ScoredPair> scored, double threshold = 0.5);

// One line of the cost breakdown.
struct CostItem {
  std::string stage;
  double flops = 0.0;  // per second of audio, or per pair for the classifier
  std::string formula;
};

struct CostReport {
  std::string feature_kind;
  std::size_t extraction_params = 0;
  double extraction_flops_per_second = 0.0;
  std::size_t dim_per_utterance = 0;
  std::vector<CostItem> extraction_items;
  std::size_t classifier_params = 0;
  double classifier_flops_per_pair = 0.0;
  std::vector<CostItem> classifier_items;
  std::vector<std::string> conventions;
};

struct ClassifierShape {
  std::size_t feature_dim = kAcousticDim;
  std::size_t hidden = 128;
  std::size_t outputs = 18;
};

ClassifierShape classifier_shape(const DiffNetModel& model);

// Closed-form operation tallies for one second of 16 kHz audio, every
// frame counted as voiced, plus one classifier pass for a single pair.
CostReport cost_report(FeatureKind kind, const ExtractionConfig& extraction, const ClassifierShape& classifier);

}  // namespace vt

#endif  // VTIMBRE_EVAL_HPP_
