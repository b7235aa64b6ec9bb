// Copyright 2026 The hyperloc Authors.
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

#include "hyperloc/error.h"

namespace hyperloc {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kLengthMismatch:
      return "LengthMismatch";
    case ErrorCode::kBadParam:
      return "BadParam";
    case ErrorCode::kNonMonotoneWeights:
      return "NonMonotoneWeights";
    case ErrorCode::kGaugeError:
      return "GaugeError";
    case ErrorCode::kUnsupportedResidual:
      return "UnsupportedResidual";
    case ErrorCode::kDimensionUnsupported:
      return "DimensionUnsupported";
    case ErrorCode::kDimensionMismatch:
      return "DimensionMismatch";
    case ErrorCode::kUncoveredPoint:
      return "UncoveredPoint";
    case ErrorCode::kNotSolved:
      return "NotSolved";
    case ErrorCode::kNoFractionality:
      return "NoFractionality";
    case ErrorCode::kNotMergeable:
      return "NotMergeable";
    case ErrorCode::kBadIndex:
      return "BadIndex";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kSizeLimit:
      return "SizeLimit";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kNumerical:
      return "Numerical";
    case ErrorCode::kWrongPreset:
      return "WrongPreset";
    case ErrorCode::kInfeasibleConstraints:
      return "InfeasibleConstraints";
    case ErrorCode::kDegenerateData:
      return "DegenerateData";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace hyperloc
