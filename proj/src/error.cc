// Copyright 2026 The HedgeClipper Authors.
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
#include "hedgeclipper/error.h"

namespace hedgeclipper {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kUnmappedLabel: return "UnmappedLabel";
    case ErrorCode::kNonIncreasingIndex: return "NonIncreasingIndex";
    case ErrorCode::kEmptyUnlabeled: return "EmptyUnlabeled";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kBadFormat: return "BadFormat";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kChecksum: return "Checksum";
    case ErrorCode::kInconsistent: return "Inconsistent";
    case ErrorCode::kZeroCoverageRow: return "ZeroCoverageRow";
    case ErrorCode::kEstimationFailed: return "EstimationFailed";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kStepTooLarge: return "StepTooLarge";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kInfeasible: return "Infeasible";
    case ErrorCode::kUndefined: return "Undefined";
  }
  return "Unknown";
}

}  // namespace hedgeclipper
