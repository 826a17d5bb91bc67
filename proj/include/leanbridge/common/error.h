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

#ifndef LEANBRIDGE_COMMON_ERROR_H_
#define LEANBRIDGE_COMMON_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace leanbridge {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kUnterminatedComment,
  kUnterminatedString,
  kMalformedDeclaration,
  kEmptyInput,
  kDimensionMismatch,
  kZeroNormVector,
  kZeroNormQuery,
  kDivergedLoss,
  kMissingSlot,
  kBackendUnavailable,
  kBudgetExceeded,
  kMalformedBackendReply,
  kCheckpointCorrupt,
  kBootstrapVerificationFailed,
  kPreconditionViolated,
  kRecordExceedsBudget,
  kPromptExceedsBudget,
  kNoProofFound,
  kVerifierTimeout,
  kVerifierCrashed,
  kConfigInvalid,
  kMissingArtifact,
  kSampleTooLarge,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception. `offset` is a byte offset
// into the offending input when one applies, npos otherwise.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

  Error(ErrorCode code, const std::string& message,
        std::size_t offset = kNoOffset);

  ErrorCode code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ErrorCode code_;
  std::size_t offset_;
};

}  // namespace leanbridge

#endif  // LEANBRIDGE_COMMON_ERROR_H_
