// Copyright 2026 The Anthro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANTHRO_ERROR_H_
#define ANTHRO_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace anthro {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyAfterFold,
  kEncodingFailure,
  kIoFailure,
  kFormatError,
  kChecksumMismatch,
  kEmptyGold,
  kNotCorrectlyPredicted,
  kScorerFailure,
  kDegenerateData,
  kTransport,
  kTimeout,
  kMalformedResponse,
  kNoValidExamples,
  kEmptyInput,
};

std::string_view error_code_name(ErrorCode code);

// All library failures are reported as anthro::Error; code() identifies the
// failure class so callers (and the CLI exit-code mapping) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anthro

#endif  // ANTHRO_ERROR_H_
