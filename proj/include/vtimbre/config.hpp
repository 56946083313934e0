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
// JSON overrides for the analysis, training and synthesis settings, and
// JSON renderings of logs and reports. Unknown keys are rejected so a
// misspelt override does not pass silently.
//
// Override document layout:
//   {"extraction": {"step", "window", "min_voiced_frames",
//                   "pitch": {...}, "formants": {...}, "cpp": {...},
//                   "shr": {...}, "cepstral": {...}},
//    "train": {"hidden", "dropout", "learning_rate", "batch_size",
//              "epochs", "gain_decay", "z_clip", "descriptors"},
//    "eval": {"threshold"}}

#ifndef VTIMBRE_CONFIG_HPP_
#define VTIMBRE_CONFIG_HPP_

#include <string>
#include <vector>

#include "vtimbre/audio.hpp"
#include "vtimbre/diffnet.hpp"
#include "vtimbre/eval.hpp"
#include "vtimbre/features.hpp"

namespace vt {

struct Settings {
  ExtractionConfig extraction;
  TrainConfig train;
  double threshold = 0.5;
};

// Applies the overrides in `json_text` (may be empty) on top of the
// defaults, then validates. The train seed is left alone.
Settings parse_settings(const std::string& json_text);
std::string settings_json(const Settings& settings);

// {"kind": "mixture", "f0": 120, "duration": 1.0, "formants": [[500, 80]], ...}
SynthSpec parse_synth_spec(const std::string& json_text);
std::string synth_spec_json(const SynthSpec& spec);

std::string training_log_json(const std::vector<EpochLog>& log);
std::string eval_report_json(const EvalReport& report, double threshold);
std::string cost_report_json(const CostReport& report);
std::string weights_json(const std::vector<FeatureWeight>& weights);

}  // namespace vt

#endif  // VTIMBRE_CONFIG_HPP_
