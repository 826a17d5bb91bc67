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

#ifndef LEANBRIDGE_BOOTSTRAP_BOOTSTRAP_H_
#define LEANBRIDGE_BOOTSTRAP_BOOTSTRAP_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/corpus/lexer.h"
#include "leanbridge/corpus/theorem.h"
#include "leanbridge/genclient/client.h"
#include "leanbridge/informalize/informalize.h"

namespace leanbridge::bootstrap {

// One line of the bootstrapped dataset.
struct ObtRecord {
  std::string name;
  std::string statement;
  std::string proof;
  std::string file_path;
  std::string commit;
  std::string generated_informal_statement_and_proof;
  std::string commented_proof;  // proof with NL comments; same code tokens

  friend bool operator==(const ObtRecord&, const ObtRecord&) = default;
};

// Serializes with the dataset's capitalized field names ("Name", ...,
// "Commented_proof"), exactly seven keys.
Json ToJson(const ObtRecord& r);
// Accepts the capitalized names or their lowercase snake_case mirror, never a
// mix. Throws InvalidArgument on missing, extra or non-string fields.
ObtRecord ObtFromJson(const Json& j);

enum class BootstrapMode { kInterleaved, kHead };
std::string_view ModeName(BootstrapMode mode);
// "interleaved" or "head"; ConfigInvalid otherwise.
BootstrapMode ParseMode(std::string_view name);

struct VerifyReport {
  bool ok = false;
  std::optional<corpus::Divergence> divergence;  // set iff !ok
  std::string Describe() const;
};

// ok iff the commented proof, comments removed, is token-equal to the
// original. Throws lexer errors for either input.
VerifyReport VerifyBootstrap(std::string_view original_proof,
                             std::string_view commented_proof);

// "/- nl -/\n" + proof. Comment delimiters inside `nl` are split with a
// space so the block can neither close early nor nest.
std::string HeadBootstrap(std::string_view proof, std::string_view nl_text);

// Lean code from a model reply: the first fenced block tagged lean/lean4 or
// untagged, else the whole reply. Trailing whitespace is trimmed.
std::string ExtractCommentedCode(std::string_view reply);

struct BootstrapOptions {
  BootstrapMode mode = BootstrapMode::kInterleaved;
  int max_attempts = 3;          // interleaved model queries per record
  bool fallback_to_head = true;  // after max_attempts failures
  int max_new_tokens = 2048;
  double temperature = 0.7;
};

struct BootstrapOutcome {
  std::string commented_proof;
  BootstrapMode mode_used = BootstrapMode::kHead;
  int attempts = 0;  // model queries made; 0 in head mode
  bool fell_back = false;
  std::vector<std::string> attempt_log;  // why each interleaved attempt failed
};

// Interleaved mode needs `client`; head mode never calls it. Without
// fallback, throws BootstrapVerificationFailed carrying the last divergence,
// or the last backend error. BudgetExceeded always propagates.
BootstrapOutcome BootstrapTheorem(const corpus::TheoremRecord& record,
                                  std::string_view nl_text, genclient::Client* client,
                                  const BootstrapOptions& options);

// Throws PreconditionViolated unless `informal` passed for this theorem and
// the commented proof verifies.
ObtRecord AssembleObtRecord(const corpus::TheoremRecord& theorem,
                            const informalize::InformalizationResult& informal,
                            const std::string& commented_proof);

struct BootstrapReport {
  std::int64_t theorems = 0;
  std::int64_t informal_failed = 0;
  std::int64_t informal_missing = 0;
  std::int64_t verification_failed = 0;
  std::int64_t backend_failed = 0;
  std::int64_t head_fallbacks = 0;  // emitted, but in head mode
  std::int64_t emitted = 0;

  Json ToJson() const;
};

struct BootstrapDataset {
  std::vector<ObtRecord> records;  // in theorem order
  BootstrapReport report;
};

// Joins theorems with informalizations by name and bootstraps each pass.
// Records run in parallel batches; output order is theorem order.
BootstrapDataset BootstrapCorpus(
    const std::vector<corpus::TheoremRecord>& theorems,
    const std::vector<informalize::InformalizationResult>& informal,
    genclient::Client* client, const BootstrapOptions& options,
    std::size_t parallelism = 4);

void WriteObtDataset(const std::filesystem::path& path, const std::vector<ObtRecord>& records);
// Re-verifies every record; a record whose comments changed its code is a
// BootstrapVerificationFailed naming the line.
std::vector<ObtRecord> LoadObtDataset(const std::filesystem::path& path);

}  // namespace leanbridge::bootstrap

#endif  // LEANBRIDGE_BOOTSTRAP_BOOTSTRAP_H_
