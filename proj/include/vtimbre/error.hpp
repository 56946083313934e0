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
#ifndef VTIMBRE_ERROR_HPP_
#define VTIMBRE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace vt {

// Numeric values are shared with vt_status in vtimbre.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kIo = 2,
  kUnsupportedFormat = 3,
  kEmptyAudio = 4,
  kTooShort = 5,
  kSilentUtterance = 6,
  kMissingFeature = 7,
  kDegenerate = 8,
  kDimensionMismatch = 9,
  kCoverage = 10,
  kSingleClass = 11,
  kInternal = 12,
};

// Short upper-case token, e.g. "SILENT_UTTERANCE".
const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vt

#endif  // VTIMBRE_ERROR_HPP_
