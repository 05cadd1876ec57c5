// Copyright 2026 The skpk Authors.
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

#include "skpk/error.hpp"

namespace skpk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kBadSum: return "BadSum";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::kCardTooLarge: return "CardTooLarge";
    case ErrorCode::kEmptyVarSet: return "EmptyVarSet";
    case ErrorCode::kOverlappingSets: return "OverlappingSets";
    case ErrorCode::kInternalConsistency: return "InternalConsistency";
    case ErrorCode::kUnboundedRegion: return "UnboundedRegion";
    case ErrorCode::kRateInfeasible: return "RateInfeasible";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kStateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace skpk
