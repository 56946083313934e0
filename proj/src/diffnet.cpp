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
#include "vtimbre/diffnet.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "vtimbre/error.hpp"

namespace vt {

namespace {

constexpr double kLogitClamp = 30.0;
constexpr double kProbFloor = 1e-7;
constexpr int kCheckpointVersion = 1;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-std::clamp(z, -kLogitClamp, kLogitClamp))); }

double target_of(Label label) { return label == Label::kBStronger ? 1.0 : 0.0; }

}  // namespace

const std::vector<std::string>& default_descriptors() {
  static const std::vector<std::string> names = {
      "bright", "thin", "coarse", "slim", "low", "pure", "rich", "magnetic", "muddy",
      "hoarse", "round", "flat", "shrill", "shrivelled", "muffled", "soft", "transparent", "husky"};
  return names;
}

void TrainConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorCode::kInvalidArgument, m); };
  if (hidden < 1) bad("hidden size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) bad("dropout must lie in [0, 1)");
  if (!(learning_rate > 0.0)) bad("learning rate must be positive");
  if (batch_size < 1) bad("batch size must be >= 1");
  if (!(gain_decay >= 0.0)) bad("gain decay must be >= 0");
  if (!(z_clip > 0.0)) bad("z clip must be positive");
}

Normalizer Normalizer::fit(const Eigen::MatrixXd& features) {
  if (features.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "cannot fit a normaliser on no utterances");
  Normalizer n;
  n.mean = features.rowwise().mean();
  n.scale = ((features.colwise() - n.mean).array().square().rowwise().sum() / static_cast<double>(features.cols()))
                .sqrt()
                .matrix();
  for (Eigen::Index i = 0; i < n.scale.size(); ++i)
    if (!(n.scale[i] > 0.0)) n.scale[i] = 1.0;
  return n;
}

Eigen::VectorXd Normalizer::apply(std::span<const double> e) const {
  if (static_cast<Eigen::Index>(e.size()) != mean.size())
    throw Error(ErrorCode::kDimensionMismatch, "embedding has " + std::to_string(e.size()) + " values, model expects " +
                                                   std::to_string(mean.size()));
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double v = e[static_cast<std::size_t>(i)];
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite embedding value");
    z[i] = std::clamp((v - mean[i]) / scale[i], -clip, clip);
  }
  return z;
}

DiffNetModel DiffNetModel::init(std::size_t feature_dim, std::size_t hidden, std::vector<std::string> descriptors,
                                std::uint64_t seed) {
  if (feature_dim == 0 || hidden == 0 || descriptors.empty())
    throw Error(ErrorCode::kInvalidArgument, "model dimensions must be positive");
  const auto d = static_cast<Eigen::Index>(feature_dim), h = static_cast<Eigen::Index>(hidden),
             n = static_cast<Eigen::Index>(descriptors.size());
  DiffNetModel m;
  m.descriptors = std::move(descriptors);
  m.normalizer.mean = Eigen::VectorXd::Zero(d);
  m.normalizer.scale = Eigen::VectorXd::Ones(d);
  m.gains = Eigen::VectorXd::Ones(d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& w, Eigen::Index rows, Eigen::Index cols) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    w.resize(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
      for (Eigen::Index r = 0; r < rows; ++r) w(r, c) = bound * unit(rng);
  };
  fill(m.w1, h, 2 * d);
  m.b1 = Eigen::VectorXd::Zero(h);
  m.gamma = Eigen::VectorXd::Ones(h);
  m.beta = Eigen::VectorXd::Zero(h);
  m.running_mean = Eigen::VectorXd::Zero(h);
  m.running_var = Eigen::VectorXd::Ones(h);
  fill(m.w2, n, h);
  m.b2 = Eigen::VectorXd::Zero(n);
  return m;
}

std::size_t DiffNetModel::parameter_count() const {
  return static_cast<std::size_t>(gains.size() + w1.size() + b1.size() + gamma.size() + beta.size() + w2.size() +
                                  b2.size());
}

std::size_t DiffNetModel::descriptor_index(const std::string& name) const {
  const auto it = std::find(descriptors.begin(), descriptors.end(), name);
  if (it == descriptors.end()) throw Error(ErrorCode::kInvalidArgument, "unknown descriptor '" + name + "'");
  return static_cast<std::size_t>(it - descriptors.begin());
}

ForwardCache forward(const DiffNetModel& model, const Eigen::MatrixXd& x, Mode mode, std::mt19937_64* rng) {
  const Eigen::Index d = model.gains.size();
  if (x.rows() != 2 * d)
    throw Error(ErrorCode::kDimensionMismatch, "pair input has " + std::to_string(x.rows()) + " rows, model expects " +
                                                   std::to_string(2 * d));
  if (x.cols() == 0) throw Error(ErrorCode::kInvalidArgument, "empty batch");
  const auto b = static_cast<double>(x.cols());
  ForwardCache c;
  c.x = x;
  c.xg = x;
  c.xg.topRows(d).array().colwise() *= model.gains.array();
  c.xg.bottomRows(d).array().colwise() *= model.gains.array();

  Eigen::MatrixXd z = model.w1 * c.xg;
  z.colwise() += model.b1;
  if (mode == Mode::kTrain) {
    c.batch_mean = z.rowwise().mean();
    z.colwise() -= c.batch_mean;
    c.batch_var = z.array().square().rowwise().sum().matrix() / b;
    c.inv_std = (c.batch_var.array() + model.bn_epsilon).rsqrt().matrix();
  } else {
    z.colwise() -= model.running_mean;
    c.inv_std = (model.running_var.array() + model.bn_epsilon).rsqrt().matrix();
  }
  c.xhat = z.array().colwise() * c.inv_std.array();
  c.y = (c.xhat.array().colwise() * model.gamma.array()).colwise() + model.beta.array();
  c.h = c.y.cwiseMax(0.0);
  if (mode == Mode::kTrain && rng != nullptr && model.dropout > 0.0) {
    const double keep = 1.0 - model.dropout, scale = 1.0 / keep;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    c.mask.resize(c.h.rows(), c.h.cols());
    for (Eigen::Index j = 0; j < c.mask.cols(); ++j)
      for (Eigen::Index i = 0; i < c.mask.rows(); ++i) c.mask(i, j) = unit(*rng) < keep ? scale : 0.0;
    c.h.array() *= c.mask.array();
  }
  c.logits = model.w2 * c.h;
  c.logits.colwise() += model.b2;
  c.scores = c.logits.unaryExpr([](double v) { return sigmoid(v); });
  return c;
}

void update_running_stats(DiffNetModel& model, const ForwardCache& cache) {
  if (cache.batch_mean.size() == 0) return;
  const double b = static_cast<double>(cache.x.cols());
  const double unbias = b > 1.0 ? b / (b - 1.0) : 1.0;
  const double m = model.bn_momentum;
  model.running_mean = (1.0 - m) * model.running_mean + m * cache.batch_mean;
  model.running_var = (1.0 - m) * model.running_var + m * unbias * cache.batch_var;
}

double pair_loss(double score, Label label) {
  const double p = std::clamp(score, kProbFloor, 1.0 - kProbFloor);
  return label == Label::kBStronger ? -std::log(p) : -std::log(1.0 - p);
}

double loss(const Eigen::MatrixXd& scores, std::span<const std::size_t> outputs, std::span<const Label> labels) {
  if (outputs.size() != static_cast<std::size_t>(scores.cols()) || labels.size() != outputs.size())
    throw Error(ErrorCode::kDimensionMismatch, "loss: batch size mismatch");
  double total = 0.0;
  for (std::size_t j = 0; j < outputs.size(); ++j)
    total += pair_loss(scores(static_cast<Eigen::Index>(outputs[j]), static_cast<Eigen::Index>(j)), labels[j]);
  return total / static_cast<double>(outputs.size());
}

DiffNetGrads backward(const DiffNetModel& model, const ForwardCache& c, std::span<const std::size_t> outputs,
                      std::span<const Label> labels) {
  const Eigen::Index bsz = c.x.cols();
  if (outputs.size() != static_cast<std::size_t>(bsz) || labels.size() != outputs.size())
    throw Error(ErrorCode::kDimensionMismatch, "backward: batch size mismatch");
  const double b = static_cast<double>(bsz);

  // Only the annotated output of each column receives a gradient.
  Eigen::MatrixXd dlogits = Eigen::MatrixXd::Zero(c.logits.rows(), bsz);
  for (Eigen::Index j = 0; j < bsz; ++j) {
    const auto o = static_cast<Eigen::Index>(outputs[static_cast<std::size_t>(j)]);
    if (o >= c.logits.rows()) throw Error(ErrorCode::kInvalidArgument, "descriptor index out of range");
    const double z = c.logits(o, j), p = c.scores(o, j);
    if (std::abs(z) > kLogitClamp || p < kProbFloor || p > 1.0 - kProbFloor) continue;
    dlogits(o, j) = (p - target_of(labels[static_cast<std::size_t>(j)])) / b;
  }

  DiffNetGrads g;
  g.w2 = dlogits * c.h.transpose();
  g.b2 = dlogits.rowwise().sum();
  Eigen::MatrixXd dh = model.w2.transpose() * dlogits;
  if (c.mask.size() != 0) dh.array() *= c.mask.array();
  Eigen::MatrixXd dy = (c.y.array() > 0.0).select(dh, 0.0);

  g.gamma = (dy.array() * c.xhat.array()).rowwise().sum().matrix();
  g.beta = dy.rowwise().sum();
  const Eigen::MatrixXd dxhat = dy.array().colwise() * model.gamma.array();
  Eigen::MatrixXd dz;
  if (c.batch_mean.size() != 0) {
    const Eigen::VectorXd sum_dxhat = dxhat.rowwise().sum();
    const Eigen::VectorXd sum_dxhat_xhat = (dxhat.array() * c.xhat.array()).rowwise().sum().matrix();
    dz = (b * dxhat.array() - (c.xhat.array().colwise() * sum_dxhat_xhat.array())).colwise() - sum_dxhat.array();
    dz.array().colwise() *= c.inv_std.array() / b;
  } else {
    dz = dxhat.array().colwise() * c.inv_std.array();
  }

  g.w1 = dz * c.xg.transpose();
  g.b1 = dz.rowwise().sum();
  const Eigen::MatrixXd dxg = model.w1.transpose() * dz;
  const Eigen::Index d = model.gains.size();
  const Eigen::ArrayXXd prod = dxg.array() * c.x.array();
  g.gains = (prod.topRows(d).rowwise().sum() + prod.bottomRows(d).rowwise().sum()).matrix();
  return g;
}

Eigen::VectorXd pair_input(const DiffNetModel& model, std::span<const double> e_a, std::span<const double> e_b) {
  const Eigen::Index d = model.gains.size();
  Eigen::VectorXd x(2 * d);
  x.head(d) = model.normalizer.apply(e_a);
  x.tail(d) = model.normalizer.apply(e_b);
  return x;
}

double score_pair(const DiffNetModel& model, std::span<const double> e_a, std::span<const double> e_b,
                  const std::string& descriptor) {
  const auto o = static_cast<Eigen::Index>(model.descriptor_index(descriptor));
  const ForwardCache c = forward(model, pair_input(model, e_a, e_b), Mode::kInfer);
  return c.scores(o, 0);
}

namespace {

// Adam moments for one parameter block.
struct AdamState {
  Eigen::ArrayXd m, v;
};

void adam_step(double* param, const double* grad, Eigen::Index n, AdamState& s, double lr, std::size_t t) {
  constexpr double kB1 = 0.9, kB2 = 0.999, kEps = 1e-8;
  if (s.m.size() == 0) {
    s.m = Eigen::ArrayXd::Zero(n);
    s.v = Eigen::ArrayXd::Zero(n);
  }
  Eigen::Map<Eigen::ArrayXd> p(param, n);
  Eigen::Map<const Eigen::ArrayXd> g(grad, n);
  s.m = kB1 * s.m + (1.0 - kB1) * g;
  s.v = kB2 * s.v + (1.0 - kB2) * g.square();
  const double c1 = 1.0 - std::pow(kB1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(kB2, static_cast<double>(t));
  p -= lr * (s.m / c1) / ((s.v / c2).sqrt() + kEps);
}

std::vector<std::pair<std::size_t, std::size_t>> make_batches(std::size_t count, std::size_t size) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t start = 0; start < count; start += size) out.emplace_back(start, std::min(count, start + size));
  // A single-sample batch has no batch variance; fold it into its neighbour.
  if (out.size() > 1 && out.back().second - out.back().first == 1) {
    out[out.size() - 2].second = out.back().second;
    out.pop_back();
  }
  return out;
}

double infer_accuracy(const DiffNetModel& model, const Eigen::MatrixXd& x, std::span<const std::size_t> outputs,
                      std::span<const Label> labels) {
  std::size_t correct = 0;
  constexpr Eigen::Index kChunk = 4096;
  for (Eigen::Index start = 0; start < x.cols(); start += kChunk) {
    const Eigen::Index len = std::min(kChunk, x.cols() - start);
    const ForwardCache c = forward(model, x.middleCols(start, len), Mode::kInfer);
    for (Eigen::Index j = 0; j < len; ++j) {
      const auto k = static_cast<std::size_t>(start + j);
      const bool says_b = c.scores(static_cast<Eigen::Index>(outputs[k]), j) >= 0.5;
      correct += says_b == (labels[k] == Label::kBStronger);
    }
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(x.cols());
}

}  // namespace

TrainResult train(std::span<const TrainingPair> pairs, const Eigen::MatrixXd& utterances, const TrainConfig& config,
                  std::vector<std::string> feature_names, const std::string& feature_kind) {
  config.validate();
  if (pairs.empty()) throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  const auto dim = static_cast<std::size_t>(utterances.rows());
  std::vector<std::string> vocab = config.descriptors.empty() ? default_descriptors() : config.descriptors;

  TrainResult result;
  DiffNetModel& model = result.model;
  model = DiffNetModel::init(dim, config.hidden, vocab, config.seed);
  model.dropout = config.dropout;
  model.feature_kind = feature_kind;
  model.feature_names = std::move(feature_names);
  if (!model.feature_names.empty() && model.feature_names.size() != dim)
    throw Error(ErrorCode::kDimensionMismatch, "feature name count does not match the embedding size");
  model.normalizer = Normalizer::fit(utterances);
  model.normalizer.clip = config.z_clip;

  const auto count = pairs.size();
  Eigen::MatrixXd x(2 * static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(count));
  std::vector<std::size_t> outputs(count);
  std::vector<Label> labels(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (pairs[k].output >= vocab.size()) throw Error(ErrorCode::kInvalidArgument, "descriptor index out of range");
    x.col(static_cast<Eigen::Index>(k)) = pair_input(model, pairs[k].e_a, pairs[k].e_b);
    outputs[k] = pairs[k].output;
    labels[k] = pairs[k].label;
  }

  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::vector<AdamState> states(7);
  std::size_t step = 0;
  Eigen::MatrixXd bx;
  std::vector<std::size_t> bo;
  std::vector<Label> bl;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    // Fisher-Yates with the raw generator output, so the order does not
    // depend on the standard library's distributions.
    for (std::size_t i = count; i-- > 1;) std::swap(order[i], order[rng() % (i + 1)]);
    double epoch_loss = 0.0;
    for (const auto& [lo, hi] : make_batches(count, config.batch_size)) {
      const auto n = static_cast<Eigen::Index>(hi - lo);
      bx.resize(x.rows(), n);
      bo.resize(hi - lo);
      bl.resize(hi - lo);
      for (std::size_t j = lo; j < hi; ++j) {
        bx.col(static_cast<Eigen::Index>(j - lo)) = x.col(static_cast<Eigen::Index>(order[j]));
        bo[j - lo] = outputs[order[j]];
        bl[j - lo] = labels[order[j]];
      }
      const ForwardCache cache = forward(model, bx, Mode::kTrain, &rng);
      epoch_loss += loss(cache.scores, bo, bl) * static_cast<double>(n);
      DiffNetGrads g = backward(model, cache, bo, bl);
      if (config.gain_decay > 0.0) g.gains += 2.0 * config.gain_decay * model.gains;
      update_running_stats(model, cache);
      ++step;
      const double lr = config.learning_rate;
      adam_step(model.gains.data(), g.gains.data(), g.gains.size(), states[0], lr, step);
      adam_step(model.w1.data(), g.w1.data(), g.w1.size(), states[1], lr, step);
      adam_step(model.b1.data(), g.b1.data(), g.b1.size(), states[2], lr, step);
      adam_step(model.gamma.data(), g.gamma.data(), g.gamma.size(), states[3], lr, step);
      adam_step(model.beta.data(), g.beta.data(), g.beta.size(), states[4], lr, step);
      adam_step(model.w2.data(), g.w2.data(), g.w2.size(), states[5], lr, step);
      adam_step(model.b2.data(), g.b2.data(), g.b2.size(), states[6], lr, step);
    }
    result.log.push_back({epoch, epoch_loss / static_cast<double>(count), infer_accuracy(model, x, outputs, labels)});
  }
  return result;
}

std::vector<FeatureWeight> feature_importance(const DiffNetModel& model) {
  std::vector<FeatureWeight> out;
  for (Eigen::Index i = 0; i < model.gains.size(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.push_back({k < model.feature_names.size() ? model.feature_names[k] : "dim" + std::to_string(k),
                   model.gains[i]});
  }
  return out;
}

namespace {

using nlohmann::json;

json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Eigen::MatrixXd& m) {
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) flat.push_back(m(r, c));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", flat}};
}

Eigen::VectorXd json_vec(const json& j, Eigen::Index expect) {
  const auto v = j.get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != expect)
    throw Error(ErrorCode::kDimensionMismatch, "checkpoint vector has the wrong length");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), expect);
}

Eigen::MatrixXd json_mat(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (j.at("rows").get<Eigen::Index>() != rows || j.at("cols").get<Eigen::Index>() != cols)
    throw Error(ErrorCode::kDimensionMismatch, "checkpoint matrix has the wrong shape");
  const auto v = j.at("data").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(v.size()) != rows * cols)
    throw Error(ErrorCode::kDimensionMismatch, "checkpoint matrix has the wrong size");
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = v[static_cast<std::size_t>(r * cols + c)];
  return m;
}

}  // namespace

std::string model_to_json(const DiffNetModel& m) {
  json j;
  j["format"] = "vtimbre-diffnet";
  j["version"] = kCheckpointVersion;
  j["feature_kind"] = m.feature_kind;
  j["feature_names"] = m.feature_names;
  j["descriptors"] = m.descriptors;
  j["feature_dim"] = m.feature_dim();
  j["hidden"] = m.hidden();
  j["dropout"] = m.dropout;
  j["bn_momentum"] = m.bn_momentum;
  j["bn_epsilon"] = m.bn_epsilon;
  j["normalizer"] = {{"mean", vec_json(m.normalizer.mean)},
                     {"scale", vec_json(m.normalizer.scale)},
                     {"clip", m.normalizer.clip}};
  j["gains"] = vec_json(m.gains);
  j["fc1"] = {{"weight", mat_json(m.w1)}, {"bias", vec_json(m.b1)}};
  j["bn"] = {{"gamma", vec_json(m.gamma)},
             {"beta", vec_json(m.beta)},
             {"running_mean", vec_json(m.running_mean)},
             {"running_var", vec_json(m.running_var)}};
  j["fc2"] = {{"weight", mat_json(m.w2)}, {"bias", vec_json(m.b2)}};
  return j.dump(1);
}

DiffNetModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnsupportedFormat, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "vtimbre-diffnet")
      throw Error(ErrorCode::kUnsupportedFormat, "not a vtimbre Diff-Net checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      throw Error(ErrorCode::kUnsupportedFormat, "unsupported checkpoint version");
    if (!j.contains("gains")) throw Error(ErrorCode::kUnsupportedFormat, "checkpoint lacks the feature-weight layer");
    DiffNetModel m;
    m.feature_kind = j.at("feature_kind").get<std::string>();
    m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    m.descriptors = j.at("descriptors").get<std::vector<std::string>>();
    const auto d = j.at("feature_dim").get<Eigen::Index>(), h = j.at("hidden").get<Eigen::Index>(),
               n = static_cast<Eigen::Index>(m.descriptors.size());
    if (d <= 0 || h <= 0 || n <= 0) throw Error(ErrorCode::kUnsupportedFormat, "checkpoint has empty dimensions");
    m.dropout = j.at("dropout").get<double>();
    m.bn_momentum = j.at("bn_momentum").get<double>();
    m.bn_epsilon = j.at("bn_epsilon").get<double>();
    const auto& nj = j.at("normalizer");
    m.normalizer.mean = json_vec(nj.at("mean"), d);
    m.normalizer.scale = json_vec(nj.at("scale"), d);
    m.normalizer.clip = nj.at("clip").get<double>();
    m.gains = json_vec(j.at("gains"), d);
    m.w1 = json_mat(j.at("fc1").at("weight"), h, 2 * d);
    m.b1 = json_vec(j.at("fc1").at("bias"), h);
    const auto& bn = j.at("bn");
    m.gamma = json_vec(bn.at("gamma"), h);
    m.beta = json_vec(bn.at("beta"), h);
    m.running_mean = json_vec(bn.at("running_mean"), h);
    m.running_var = json_vec(bn.at("running_var"), h);
    m.w2 = json_mat(j.at("fc2").at("weight"), n, h);
    m.b2 = json_vec(j.at("fc2").at("bias"), n);
    if (!m.feature_names.empty() && static_cast<Eigen::Index>(m.feature_names.size()) != d)
      throw Error(ErrorCode::kDimensionMismatch, "checkpoint feature names do not match its dimension");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kUnsupportedFormat, std::string("malformed checkpoint: ") + e.what());
  }
}

void save_model(const DiffNetModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

DiffNetModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return model_from_json(text.str());
}

}  // namespace vt
