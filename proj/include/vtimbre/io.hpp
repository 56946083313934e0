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
// On-disk formats: feature tables (CSV or JSON lines), the JSON-lines pair
// manifest, and the skip list written by batch extraction.

#ifndef VTIMBRE_IO_HPP_
#define VTIMBRE_IO_HPP_

#include <map>
#include <string>
#include <vector>

#include "vtimbre/diffnet.hpp"
#include "vtimbre/features.hpp"

namespace vt {

struct FeatureTable {
  std::string kind;  // "acoustic", "mfcc", "lfc" or "custom"
  std::vector<std::string> names;
  std::vector<FeatureVector> rows;  // sorted by id

  // Exact id match first, then file stem ("dir/x.wav" finds "x").
  const FeatureVector* find(const std::string& ref) const;
  void sort_rows();
};

// Kind implied by a column-name list.
std::string infer_kind(const std::vector<std::string>& names);

// CSV: header "id,<names>,voiced_frames", values printed with 17
// significant digits. JSONL: one object per row with the same field names
// plus "kind".
void write_feature_table(const FeatureTable& table, const std::string& path);
FeatureTable read_feature_table(const std::string& path);
std::string feature_table_csv(const FeatureTable& table);
FeatureTable parse_feature_csv(const std::string& text);
std::string feature_table_jsonl(const FeatureTable& table);
FeatureTable parse_feature_jsonl(const std::string& text);

// "dir/name.wav" -> "name".
std::string file_stem(const std::string& ref);
// Text before the first '_' of the stem; the synthetic corpus and VCTK
// both name files <speaker>_<utterance>.
std::string speaker_of(const std::string& ref);

struct ManifestRecord {
  PairRecord pair;
  std::string split;  // "train" or "test"
};

std::vector<ManifestRecord> parse_manifest(const std::string& text);
std::vector<ManifestRecord> read_manifest(const std::string& path);
std::string manifest_jsonl(const std::vector<ManifestRecord>& records);
void write_manifest(const std::vector<ManifestRecord>& records, const std::string& path);

// Throws kInvalidArgument naming descriptors outside the vocabulary and
// pairs comparing an utterance with itself. Returns warnings, e.g. for
// speakers that appear in both splits.
std::vector<std::string> check_manifest(const std::vector<ManifestRecord>& records,
                                        const std::vector<std::string>& vocabulary);

std::vector<ManifestRecord> select_split(const std::vector<ManifestRecord>& records, const std::string& split);

// Throws kCoverage listing every id the table lacks.
void require_coverage(const FeatureTable& table, const std::vector<ManifestRecord>& records);

struct SkipEntry {
  std::string path;
  std::string reason;  // error token, e.g. SILENT_UTTERANCE
  std::string message;
};
std::string skip_list_jsonl(const std::vector<SkipEntry>& entries);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace vt

#endif  // VTIMBRE_IO_HPP_
