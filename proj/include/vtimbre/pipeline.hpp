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
// Glue between feature tables, manifests and the classifier: batch
// extraction, training from a manifest and scoring a manifest split.

#ifndef VTIMBRE_PIPELINE_HPP_
#define VTIMBRE_PIPELINE_HPP_

#include <string>
#include <vector>

#include "vtimbre/diffnet.hpp"
#include "vtimbre/eval.hpp"
#include "vtimbre/features.hpp"
#include "vtimbre/io.hpp"

namespace vt {

struct ExtractionResult {
  FeatureTable table;
  std::vector<SkipEntry> skipped;
};

// Extracts every file with `jobs` worker threads (0 = hardware
// concurrency). Row ids are file stems; rows are sorted by id whatever the
// completion order. Files that fail with kSilentUtterance, kMissingFeature,
// kTooShort or kEmptyAudio go to the skip list; any other error aborts.
// Throws kSilentUtterance when every file was skipped.
ExtractionResult extract_files(const std::vector<std::string>& paths, FeatureKind kind,
                               const ExtractionConfig& config, std::size_t jobs);

// Trains on the records (normally the train split). Throws kCoverage when
// the table lacks a referenced utterance and kInvalidArgument for an empty
// record list or a descriptor outside config.descriptors.
TrainResult train_from_table(const FeatureTable& table, const std::vector<ManifestRecord>& records,
                             const TrainConfig& config);

// Infer-mode scores for every record, in manifest order.
std::vector<ScoredPair> score_records(const DiffNetModel& model, const FeatureTable& table,
                                      const std::vector<ManifestRecord>& records);

}  // namespace vt

#endif  // VTIMBRE_PIPELINE_HPP_
