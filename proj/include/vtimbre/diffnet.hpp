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
// Diff-Net: a pairwise classifier over concatenated utterance embeddings.
// A shared per-feature gain layer, fc1, batch normalisation, ReLU,
// dropout, fc2 and a sigmoid head with one output per descriptor. The
// forward and backward passes are written out by hand; training uses Adam.

#ifndef VTIMBRE_DIFFNET_HPP_
#define VTIMBRE_DIFFNET_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace vt {

// Score semantics: 0 means utterance A is the stronger one, 1 means B.
enum class Label { kAStronger, kBStronger };

struct PairRecord {
  std::string utt_a;
  std::string utt_b;
  std::string descriptor;
  Label label = Label::kAStronger;
};

// The 18 timbre descriptors of the VCTK-RVA annotation.
const std::vector<std::string>& default_descriptors();

struct TrainConfig {
  std::size_t hidden = 128;
  double dropout = 0.3;
  double learning_rate = 1e-3;
  std::size_t batch_size = 256;
  std::size_t epochs = 30;
  std::uint64_t seed = 0;
  // L2 penalty pulling the feature gains towards zero; 0 disables it.
  double gain_decay = 0.0;
  double z_clip = 10.0;
  // Output vocabulary; empty means default_descriptors().
  std::vector<std::string> descriptors;
  void validate() const;
};

// Per-dimension z-score statistics of single-utterance embeddings.
struct Normalizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd scale;  // population std, 1 where the std is 0
  double clip = 10.0;

  static Normalizer fit(const Eigen::MatrixXd& features);  // one column per utterance
  Eigen::VectorXd apply(std::span<const double> e) const;
};

struct DiffNetModel {
  std::string feature_kind;  // "acoustic", "mfcc", "lfc" or free-form
  std::vector<std::string> feature_names;
  std::vector<std::string> descriptors;
  Normalizer normalizer;

  Eigen::VectorXd gains;  // D, shared by both halves of the pair input
  Eigen::MatrixXd w1;     // H x 2D
  Eigen::VectorXd b1;     // H
  Eigen::VectorXd gamma;  // H
  Eigen::VectorXd beta;   // H
  Eigen::VectorXd running_mean;
  Eigen::VectorXd running_var;
  Eigen::MatrixXd w2;  // N x H
  Eigen::VectorXd b2;  // N
  double bn_momentum = 0.1;
  double bn_epsilon = 1e-5;
  double dropout = 0.3;

  // Gains 1, BN identity, running var 1, fc weights uniform in
  // +-1/sqrt(fan_in) drawn from the seeded generator.
  static DiffNetModel init(std::size_t feature_dim, std::size_t hidden,
                           std::vector<std::string> descriptors, std::uint64_t seed);

  std::size_t feature_dim() const { return static_cast<std::size_t>(gains.size()); }
  std::size_t hidden() const { return static_cast<std::size_t>(b1.size()); }
  std::size_t outputs() const { return static_cast<std::size_t>(b2.size()); }
  // Trainable parameters (running statistics excluded).
  std::size_t parameter_count() const;
  // Throws kInvalidArgument for an unknown descriptor.
  std::size_t descriptor_index(const std::string& name) const;
};

// Gradients, laid out like the trainable parameters.
struct DiffNetGrads {
  Eigen::VectorXd gains;
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1, gamma, beta;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

enum class Mode { kTrain, kInfer };

// Activations kept for the backward pass.
struct ForwardCache {
  Eigen::MatrixXd x;      // 2D x B, normalised pair inputs
  Eigen::MatrixXd xg;     // after the gain layer
  Eigen::MatrixXd xhat;   // H x B, BN-normalised
  Eigen::VectorXd batch_mean;  // train mode only
  Eigen::VectorXd batch_var;   // biased, train mode only
  Eigen::VectorXd inv_std;
  Eigen::MatrixXd y;      // BN output, pre-ReLU
  Eigen::MatrixXd mask;   // dropout multipliers (empty in infer mode)
  Eigen::MatrixXd h;      // after ReLU and dropout
  Eigen::MatrixXd logits; // N x B, unclamped
  Eigen::MatrixXd scores; // N x B, in (0, 1)
};

// x holds one normalised pair input per column. In train mode BN uses the
// batch statistics and dropout masks are drawn from rng (no dropout when
// rng is null).
ForwardCache forward(const DiffNetModel& model, const Eigen::MatrixXd& x, Mode mode,
                     std::mt19937_64* rng = nullptr);

// Momentum update of the BN running statistics from a train-mode pass;
// the variance is the unbiased batch estimate.
void update_running_stats(DiffNetModel& model, const ForwardCache& cache);

// Masked binary cross-entropy, mean over the batch. outputs[j] is the
// descriptor index for column j.
double loss(const Eigen::MatrixXd& scores, std::span<const std::size_t> outputs,
            std::span<const Label> labels);
double pair_loss(double score, Label label);

DiffNetGrads backward(const DiffNetModel& model, const ForwardCache& cache,
                      std::span<const std::size_t> outputs, std::span<const Label> labels);

// Builds the normalised [z(e_a); z(e_b)] column.
Eigen::VectorXd pair_input(const DiffNetModel& model, std::span<const double> e_a,
                           std::span<const double> e_b);

// Infer-mode score of one pair for one descriptor.
double score_pair(const DiffNetModel& model, std::span<const double> e_a, std::span<const double> e_b,
                  const std::string& descriptor);

// A pair whose embeddings have already been looked up.
struct TrainingPair {
  std::span<const double> e_a;
  std::span<const double> e_b;
  std::size_t output = 0;
  Label label = Label::kAStronger;
};

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;      // mean training loss over the epoch
  double accuracy = 0.0;  // percent, infer mode over the training pairs
};

struct TrainResult {
  DiffNetModel model;
  std::vector<EpochLog> log;
};

// utterances: every embedding referenced by the training pairs, used to
// fit the normaliser.
TrainResult train(std::span<const TrainingPair> pairs, const Eigen::MatrixXd& utterances,
                  const TrainConfig& config, std::vector<std::string> feature_names,
                  const std::string& feature_kind);

struct FeatureWeight {
  std::string name;
  double weight = 0.0;
};
// Learned gains paired with feature names, in feature order.
std::vector<FeatureWeight> feature_importance(const DiffNetModel& model);

// JSON checkpoint; doubles round-trip exactly.
void save_model(const DiffNetModel& model, const std::string& path);
DiffNetModel load_model(const std::string& path);
std::string model_to_json(const DiffNetModel& model);
DiffNetModel model_from_json(const std::string& text);

}  // namespace vt

#endif  // VTIMBRE_DIFFNET_HPP_
