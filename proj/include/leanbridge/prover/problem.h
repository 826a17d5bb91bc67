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

#ifndef LEANBRIDGE_PROVER_PROBLEM_H_
#define LEANBRIDGE_PROVER_PROBLEM_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/corpus/lean3.h"
#include "leanbridge/trainprep/tokenizer.h"

namespace leanbridge::prover {

struct Problem {
  std::string name;
  std::string fl_statement;
  std::string nl_statement_and_proof;
  std::string imports;  // fixed preamble, never generated

  friend bool operator==(const Problem&, const Problem&) = default;
};

Json ToJson(const Problem& p);
// Requires name and fl_statement; the other fields default to empty.
Problem ProblemFromJson(const Json& j);
// Throws InvalidArgument on duplicate names.
std::vector<Problem> LoadProblems(const std::filesystem::path& path);

// A solved theorem available as an in-context example.
struct PoolExample {
  std::string name;
  std::string nl;
  std::string statement;
  std::string proof;
  int round = 0;  // round that verified it; 0 for seeds

  friend bool operator==(const PoolExample&, const PoolExample&) = default;
};

Json ToJson(const PoolExample& e);
// Accepts {name, nl, statement, proof}, round optional.
PoolExample PoolExampleFromJson(const Json& j);
std::vector<PoolExample> LoadExamplePool(const std::filesystem::path& path);

struct PromptConfig {
  int k_min = 10;
  int k_max = 16;
  std::int64_t context_budget = 8192;  // prompt tokens
  bool nl_guidance = true;

  // Throws ConfigInvalid unless 0 <= k_min <= k_max and the budget is positive.
  void Validate() const;
};

struct AssembledPrompt {
  std::string text;
  std::vector<std::string> example_names;  // in prompt order
  std::int64_t tokens = 0;
};

// Takes whole examples from the front of `pool` (already in priority order)
// while they fit in the budget, at most k_max of them, then the problem's
// own sections. k_min is a target only: a small pool or budget gives fewer.
// Throws PromptExceedsBudget when the problem alone does not fit.
AssembledPrompt AssembleProofPrompt(const Problem& problem, const std::vector<PoolExample>& pool,
                                    const PromptConfig& config,
                                    const trainprep::Tokenizer& tokenizer);

struct ExtractedProof {
  std::string proof;
  // Non-empty means the sample is rejected before verification.
  std::vector<corpus::Lean3Finding> lean3;
};

// Finds the declaration of `problem` in model output: fenced blocks first,
// else the raw text. The region runs from the `theorem`/`lemma` keyword to
// the next top-level declaration, section marker or fence. Comments are
// kept. Throws NoProofFound.
ExtractedProof ExtractProof(std::string_view generated_text, const Problem& problem);

// True when `proof` restates the problem's statement unchanged, ignoring
// comments and whitespace. A proof of a weaker statement must never count.
bool KeepsStatement(const Problem& problem, std::string_view proof);

}  // namespace leanbridge::prover

#endif  // LEANBRIDGE_PROVER_PROBLEM_H_
