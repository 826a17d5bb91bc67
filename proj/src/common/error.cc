// Copyright 2026 The Leanbridge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leanbridge/common/error.h"

namespace leanbridge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnterminatedComment: return "UnterminatedComment";
    case ErrorCode::kUnterminatedString: return "UnterminatedString";
    case ErrorCode::kMalformedDeclaration: return "MalformedDeclaration";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroNormVector: return "ZeroNormVector";
    case ErrorCode::kZeroNormQuery: return "ZeroNormQuery";
    case ErrorCode::kDivergedLoss: return "DivergedLoss";
    case ErrorCode::kMissingSlot: return "MissingSlot";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kMalformedBackendReply: return "MalformedBackendReply";
    case ErrorCode::kCheckpointCorrupt: return "CheckpointCorrupt";
    case ErrorCode::kBootstrapVerificationFailed:
      return "BootstrapVerificationFailed";
    case ErrorCode::kPreconditionViolated: return "PreconditionViolated";
    case ErrorCode::kRecordExceedsBudget: return "RecordExceedsBudget";
    case ErrorCode::kPromptExceedsBudget: return "PromptExceedsBudget";
    case ErrorCode::kNoProofFound: return "NoProofFound";
    case ErrorCode::kVerifierTimeout: return "VerifierTimeout";
    case ErrorCode::kVerifierCrashed: return "VerifierCrashed";
    case ErrorCode::kConfigInvalid: return "ConfigInvalid";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kSampleTooLarge: return "SampleTooLarge";
  }
  return "Unknown";
}

namespace {

std::string Describe(ErrorCode code, const std::string& message,
                     std::size_t offset) {
  std::string out(ErrorCodeName(code));
  out += ": ";
  out += message;
  if (offset != Error::kNoOffset) {
    out += " (at byte ";
    out += std::to_string(offset);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t offset)
    : std::runtime_error(Describe(code, message, offset)),
      code_(code),
      offset_(offset) {}

}  // namespace leanbridge
