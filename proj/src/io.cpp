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
#include "vtimbre/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vtimbre/error.hpp"

namespace vt {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::kUnsupportedFormat, "line " + std::to_string(line) + ": '" + s + "' is not a number");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void check_row(const FeatureTable& t, const FeatureVector& row) {
  if (row.id.empty() || row.id.find_first_of(",\n\r") != std::string::npos)
    throw Error(ErrorCode::kInvalidArgument, "feature id '" + row.id + "' is empty or contains a separator");
  if (row.values.size() != t.names.size())
    throw Error(ErrorCode::kDimensionMismatch, "row '" + row.id + "' has " + std::to_string(row.values.size()) +
                                                   " values for " + std::to_string(t.names.size()) + " columns");
}

}  // namespace

const FeatureVector* FeatureTable::find(const std::string& ref) const {
  auto it = std::lower_bound(rows.begin(), rows.end(), ref,
                             [](const FeatureVector& r, const std::string& id) { return r.id < id; });
  if (it != rows.end() && it->id == ref) return &*it;
  const std::string stem = file_stem(ref);
  it = std::lower_bound(rows.begin(), rows.end(), stem,
                        [](const FeatureVector& r, const std::string& id) { return r.id < id; });
  if (it != rows.end() && it->id == stem) return &*it;
  for (const auto& r : rows)
    if (file_stem(r.id) == stem) return &r;
  return nullptr;
}

void FeatureTable::sort_rows() {
  std::sort(rows.begin(), rows.end(), [](const FeatureVector& a, const FeatureVector& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].id == rows[i - 1].id) throw Error(ErrorCode::kInvalidArgument, "duplicate feature id '" + rows[i].id + "'");
}

std::string infer_kind(const std::vector<std::string>& names) {
  for (FeatureKind k : {FeatureKind::kAcoustic, FeatureKind::kMfcc, FeatureKind::kLfc})
    if (names == feature_names(k)) return feature_kind_name(k);
  return "custom";
}

std::string feature_table_csv(const FeatureTable& t) {
  std::string out = "id";
  for (const auto& n : t.names) out += "," + n;
  out += ",voiced_frames\n";
  for (const auto& row : t.rows) {
    check_row(t, row);
    out += row.id;
    for (double v : row.values) out += "," + format_double(v);
    out += "," + std::to_string(row.voiced_frames) + "\n";
  }
  return out;
}

FeatureTable parse_feature_csv(const std::string& text) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw Error(ErrorCode::kUnsupportedFormat, "feature file is empty");
  const auto header = split_csv(lines[0]);
  if (header.size() < 3 || header.front() != "id" || header.back() != "voiced_frames")
    throw Error(ErrorCode::kUnsupportedFormat, "feature CSV header must be id,<features...>,voiced_frames");
  FeatureTable t;
  t.names.assign(header.begin() + 1, header.end() - 1);
  t.kind = infer_kind(t.names);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = split_csv(lines[i]);
    if (cells.size() != header.size())
      throw Error(ErrorCode::kUnsupportedFormat, "line " + std::to_string(i + 1) + " has " +
                                                     std::to_string(cells.size()) + " cells, expected " +
                                                     std::to_string(header.size()));
    FeatureVector row;
    row.id = cells.front();
    for (std::size_t c = 1; c + 1 < cells.size(); ++c) row.values.push_back(parse_double(cells[c], i + 1));
    row.voiced_frames = static_cast<std::size_t>(parse_double(cells.back(), i + 1));
    t.rows.push_back(std::move(row));
  }
  t.sort_rows();
  return t;
}

std::string feature_table_jsonl(const FeatureTable& t) {
  std::string out;
  for (const auto& row : t.rows) {
    check_row(t, row);
    json j = json::object();
    j["id"] = row.id;
    j["kind"] = t.kind;
    // Keep the canonical column order by writing names alongside values.
    j["names"] = t.names;
    j["values"] = row.values;
    j["voiced_frames"] = row.voiced_frames;
    out += j.dump() + "\n";
  }
  return out;
}

FeatureTable parse_feature_jsonl(const std::string& text) {
  FeatureTable t;
  bool first = true;
  std::size_t line_no = 0;
  for (const auto& line : lines_of(text)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      auto names = j.at("names").get<std::vector<std::string>>();
      if (first) {
        t.names = std::move(names);
        t.kind = j.value("kind", infer_kind(t.names));
        first = false;
      } else if (names != t.names) {
        throw Error(ErrorCode::kUnsupportedFormat, "line " + std::to_string(line_no) + ": column names differ");
      }
      FeatureVector row;
      row.id = j.at("id").get<std::string>();
      row.values = j.at("values").get<std::vector<double>>();
      row.voiced_frames = j.value("voiced_frames", std::size_t{0});
      check_row(t, row);
      t.rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kUnsupportedFormat, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (first) throw Error(ErrorCode::kUnsupportedFormat, "feature file is empty");
  t.sort_rows();
  return t;
}

void write_feature_table(const FeatureTable& table, const std::string& path) {
  const bool jsonl = ends_with(path, ".jsonl") || ends_with(path, ".json");
  write_text_file(path, jsonl ? feature_table_jsonl(table) : feature_table_csv(table));
}

FeatureTable read_feature_table(const std::string& path) {
  const std::string text = read_text_file(path);
  const bool jsonl = ends_with(path, ".jsonl") || ends_with(path, ".json");
  return jsonl ? parse_feature_jsonl(text) : parse_feature_csv(text);
}

std::string file_stem(const std::string& ref) {
  const auto slash = ref.find_last_of("/\\");
  std::string base = slash == std::string::npos ? ref : ref.substr(slash + 1);
  const auto dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base.resize(dot);
  return base;
}

std::string speaker_of(const std::string& ref) {
  const std::string stem = file_stem(ref);
  return stem.substr(0, stem.find('_'));
}

std::vector<ManifestRecord> parse_manifest(const std::string& text) {
  std::vector<ManifestRecord> out;
  std::size_t line_no = 0;
  for (const auto& line : lines_of(text)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = "manifest line " + std::to_string(line_no) + ": ";
    try {
      const json j = json::parse(line);
      ManifestRecord r;
      r.pair.utt_a = j.at("utt_a").get<std::string>();
      r.pair.utt_b = j.at("utt_b").get<std::string>();
      r.pair.descriptor = j.at("descriptor").get<std::string>();
      const auto label = j.at("label").get<std::string>();
      if (label == "A")
        r.pair.label = Label::kAStronger;
      else if (label == "B")
        r.pair.label = Label::kBStronger;
      else
        throw Error(ErrorCode::kInvalidArgument, where + "label must be \"A\" or \"B\"");
      r.split = j.value("split", std::string("train"));
      if (r.split != "train" && r.split != "test")
        throw Error(ErrorCode::kInvalidArgument, where + "split must be \"train\" or \"test\"");
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kUnsupportedFormat, where + e.what());
    }
  }
  return out;
}

std::vector<ManifestRecord> read_manifest(const std::string& path) { return parse_manifest(read_text_file(path)); }

std::string manifest_jsonl(const std::vector<ManifestRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json j = json::object();
    j["utt_a"] = r.pair.utt_a;
    j["utt_b"] = r.pair.utt_b;
    j["descriptor"] = r.pair.descriptor;
    j["label"] = r.pair.label == Label::kAStronger ? "A" : "B";
    j["split"] = r.split;
    out += j.dump() + "\n";
  }
  return out;
}

void write_manifest(const std::vector<ManifestRecord>& records, const std::string& path) {
  write_text_file(path, manifest_jsonl(records));
}

std::vector<std::string> check_manifest(const std::vector<ManifestRecord>& records,
                                        const std::vector<std::string>& vocabulary) {
  std::set<std::string> unknown;
  for (const auto& r : records) {
    if (std::find(vocabulary.begin(), vocabulary.end(), r.pair.descriptor) == vocabulary.end())
      unknown.insert(r.pair.descriptor);
    if (r.pair.utt_a == r.pair.utt_b)
      throw Error(ErrorCode::kInvalidArgument, "pair compares '" + r.pair.utt_a + "' with itself");
  }
  if (!unknown.empty()) {
    std::string list;
    for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
    throw Error(ErrorCode::kInvalidArgument, "descriptors outside the vocabulary: " + list);
  }
  std::set<std::string> train, test;
  for (const auto& r : records)
    for (const auto* u : {&r.pair.utt_a, &r.pair.utt_b}) (r.split == "train" ? train : test).insert(speaker_of(*u));
  std::vector<std::string> warnings;
  std::string shared;
  std::size_t count = 0;
  for (const auto& s : train)
    if (test.count(s)) {
      if (count++ < 10) shared += (shared.empty() ? "" : ", ") + s;
    }
  if (count > 0)
    warnings.push_back(std::to_string(count) + " speaker prefix(es) appear in both splits: " + shared +
                       (count > 10 ? ", ..." : ""));
  return warnings;
}

std::vector<ManifestRecord> select_split(const std::vector<ManifestRecord>& records, const std::string& split) {
  std::vector<ManifestRecord> out;
  for (const auto& r : records)
    if (r.split == split) out.push_back(r);
  return out;
}

void require_coverage(const FeatureTable& table, const std::vector<ManifestRecord>& records) {
  std::set<std::string> missing;
  for (const auto& r : records)
    for (const auto* u : {&r.pair.utt_a, &r.pair.utt_b})
      if (table.find(*u) == nullptr) missing.insert(*u);
  if (missing.empty()) return;
  std::string list;
  std::size_t shown = 0;
  for (const auto& m : missing)
    if (shown++ < 20) list += (list.empty() ? "" : ", ") + m;
  throw Error(ErrorCode::kCoverage, std::to_string(missing.size()) + " utterance(s) have no features: " + list +
                                        (missing.size() > 20 ? ", ..." : ""));
}

std::string skip_list_jsonl(const std::vector<SkipEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    json j = json::object();
    j["path"] = e.path;
    j["reason"] = e.reason;
    j["message"] = e.message;
    out += j.dump() + "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace vt
