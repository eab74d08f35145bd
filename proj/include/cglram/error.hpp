// Copyright 2026 The CGLRAM Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cglram {

enum class ErrorCode {
  NonSquare,
  RankOutOfRange,
  NonFinite,
  ConvergenceFailure,
  EmptyStack,
  ShapeMismatch,
  TooManyClusters,
  UnknownMethod,
  BadMagic,
  TruncatedFile,
  DimensionOverflow,
  InvalidSpec,
  InvalidRatio,
  IoFailure,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::EmptyStack: return "EmptyStack";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TooManyClusters: return "TooManyClusters";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidRatio: return "InvalidRatio";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) throw Error(code, message);
}

}  // namespace cglram
