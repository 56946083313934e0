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
#include "vtimbre/error.hpp"

namespace vt {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIo: return "IO";
    case ErrorCode::kUnsupportedFormat: return "UNSUPPORTED_FORMAT";
    case ErrorCode::kEmptyAudio: return "EMPTY_AUDIO";
    case ErrorCode::kTooShort: return "TOO_SHORT";
    case ErrorCode::kSilentUtterance: return "SILENT_UTTERANCE";
    case ErrorCode::kMissingFeature: return "MISSING_FEATURE";
    case ErrorCode::kDegenerate: return "DEGENERATE";
    case ErrorCode::kDimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::kCoverage: return "COVERAGE";
    case ErrorCode::kSingleClass: return "SINGLE_CLASS";
    case ErrorCode::kInternal: return "INTERNAL";
  }
  return "UNKNOWN";
}

}  // namespace vt
