/*
 * Copyright 2026 The dfkit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DFKIT_ERROR_HPP_
#define DFKIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dfkit {

enum class ErrorCode {
  kUnknownDataset,
  kMissingRoot,
  kEmptyDataset,
  kSplitListMissing,
  kInvalidPlan,
  kDegenerateLandmarks,
  kDimensionMismatch,
  kDecodeFailure,
  kUnsupportedImageDepth,
  kSingleClass,
  kNoPositives,
  kEmptySeries,
  kEmptySet,
  kParseError,
  kInvalidArgument,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as dfkit::Error so callers can switch on the
// code rather than parse messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDataset: return "UnknownDataset";
    case ErrorCode::kMissingRoot: return "MissingRoot";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kSplitListMissing: return "SplitListMissing";
    case ErrorCode::kInvalidPlan: return "InvalidPlan";
    case ErrorCode::kDegenerateLandmarks: return "DegenerateLandmarks";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDecodeFailure: return "DecodeFailure";
    case ErrorCode::kUnsupportedImageDepth: return "UnsupportedImageDepth";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kEmptySeries: return "EmptySeries";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace dfkit

#endif  // DFKIT_ERROR_HPP_
