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
#include "vtimbre/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "vtimbre/error.hpp"

namespace vt {

namespace {

bool skippable(ErrorCode code) {
  return code == ErrorCode::kSilentUtterance || code == ErrorCode::kMissingFeature ||
         code == ErrorCode::kTooShort || code == ErrorCode::kEmptyAudio;
}

void check_dimensions(const DiffNetModel& model, const FeatureTable& table) {
  if (table.names.size() != model.feature_dim())
    throw Error(ErrorCode::kDimensionMismatch, "feature file has " + std::to_string(table.names.size()) +
                                                   " columns, model expects " +
                                                   std::to_string(model.feature_dim()));
  if (!model.feature_names.empty() && table.names != model.feature_names)
    throw Error(ErrorCode::kDimensionMismatch, "feature columns differ from the ones the model was trained on");
}

}  // namespace

ExtractionResult extract_files(const std::vector<std::string>& paths, FeatureKind kind,
                               const ExtractionConfig& config, std::size_t jobs) {
  if (paths.empty()) throw Error(ErrorCode::kInvalidArgument, "no input files");
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, paths.size());

  std::vector<std::optional<FeatureVector>> rows(paths.size());
  std::vector<std::optional<SkipEntry>> skips(paths.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= paths.size()) return;
      {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (failure) return;
      }
      try {
        FeatureVector row = extract_features(load_audio(paths[i]), kind, config);
        row.id = file_stem(paths[i]);
        rows[i] = std::move(row);
      } catch (const Error& e) {
        if (skippable(e.code())) {
          skips[i] = SkipEntry{paths[i], error_code_name(e.code()), e.what()};
        } else {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::make_exception_ptr(Error(e.code(), paths[i] + ": " + e.what()));
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExtractionResult out;
  out.table.kind = feature_kind_name(kind);
  out.table.names = feature_names(kind);
  for (auto& r : rows)
    if (r) out.table.rows.push_back(std::move(*r));
  for (auto& s : skips)
    if (s) out.skipped.push_back(std::move(*s));
  if (out.table.rows.empty())
    throw Error(ErrorCode::kSilentUtterance, "all " + std::to_string(paths.size()) + " file(s) were skipped");
  out.table.sort_rows();
  return out;
}

TrainResult train_from_table(const FeatureTable& table, const std::vector<ManifestRecord>& records,
                             const TrainConfig& config) {
  if (records.empty()) throw Error(ErrorCode::kInvalidArgument, "no training pairs");
  require_coverage(table, records);
  const auto& vocabulary = config.descriptors.empty() ? default_descriptors() : config.descriptors;

  // Column per distinct utterance, in first-reference order.
  std::map<const FeatureVector*, Eigen::Index> column;
  std::vector<const FeatureVector*> order;
  std::vector<TrainingPair> pairs;
  pairs.reserve(records.size());
  for (const auto& r : records) {
    const auto out = std::find(vocabulary.begin(), vocabulary.end(), r.pair.descriptor);
    if (out == vocabulary.end())
      throw Error(ErrorCode::kInvalidArgument, "descriptor '" + r.pair.descriptor + "' is not in the vocabulary");
    const FeatureVector* a = table.find(r.pair.utt_a);
    const FeatureVector* b = table.find(r.pair.utt_b);
    for (const FeatureVector* u : {a, b})
      if (column.emplace(u, static_cast<Eigen::Index>(order.size())).second) order.push_back(u);
    pairs.push_back({a->values, b->values, static_cast<std::size_t>(out - vocabulary.begin()), r.pair.label});
  }
  Eigen::MatrixXd utterances(static_cast<Eigen::Index>(table.names.size()), static_cast<Eigen::Index>(order.size()));
  for (std::size_t j = 0; j < order.size(); ++j)
    for (std::size_t i = 0; i < table.names.size(); ++i)
      utterances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = order[j]->values[i];
  return train(pairs, utterances, config, table.names, table.kind);
}

std::vector<ScoredPair> score_records(const DiffNetModel& model, const FeatureTable& table,
                                      const std::vector<ManifestRecord>& records) {
  check_dimensions(model, table);
  require_coverage(table, records);
  std::vector<ScoredPair> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    const FeatureVector* a = table.find(r.pair.utt_a);
    const FeatureVector* b = table.find(r.pair.utt_b);
    out.push_back({r.pair.label, score_pair(model, a->values, b->values, r.pair.descriptor), r.pair.descriptor});
  }
  return out;
}

}  // namespace vt
