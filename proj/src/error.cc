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

#include "anthro/error.h"

namespace anthro {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyAfterFold: return "EmptyAfterFold";
    case ErrorCode::kEncodingFailure: return "EncodingFailure";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kChecksumMismatch: return "ChecksumMismatch";
    case ErrorCode::kEmptyGold: return "EmptyGold";
    case ErrorCode::kNotCorrectlyPredicted: return "NotCorrectlyPredicted";
    case ErrorCode::kScorerFailure: return "ScorerFailure";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMalformedResponse: return "MalformedResponse";
    case ErrorCode::kNoValidExamples: return "NoValidExamples";
    case ErrorCode::kEmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

}  // namespace anthro
