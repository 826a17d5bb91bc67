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

#ifndef LEANBRIDGE_PROVER_HARNESS_H_
#define LEANBRIDGE_PROVER_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/genclient/client.h"
#include "leanbridge/prover/problem.h"
#include "leanbridge/prover/verifier.h"
#include "leanbridge/trainprep/tokenizer.h"

namespace leanbridge::prover {

struct ProofAttempt {
  std::string problem_name;
  int round = 0;
  int sample_index = 0;  // within this problem and round
  std::string generated_text;
  std::string extracted_proof;
  Verdict verdict = Verdict::kRejected;
  std::string diagnostic;
};

Json ToJson(const ProofAttempt& a);

struct ProvedEntry {
  std::string proof;
  int round = 0;
  int sample_index = 0;
};

struct IterationState {
  int round = 0;  // rounds completed
  // Priority order: newest round first, seeds last in their given order.
  std::vector<PoolExample> example_pool;
  std::size_t seed_count = 0;
  std::map<std::string, ProvedEntry> proved;
  std::set<std::string> unproved;
  std::int64_t budget_used = 0;  // samples drawn

  // Throws PreconditionViolated when proved and unproved overlap or the
  // seeds are no longer the pool's tail.
  void Validate() const;
};

IterationState InitialState(const std::vector<Problem>& problems,
                            std::vector<PoolExample> seed_pool);

struct HarnessConfig {
  int n_samples = 128;           // per unproved problem per round
  int samples_per_request = 16;  // samples asked of the backend at once
  int max_rounds = 2;
  PromptConfig prompt;
  int max_new_tokens = 1024;
  double temperature = 0.7;
  std::size_t parallelism = 4;           // problems in flight
  std::size_t verifier_parallelism = 2;  // verifier calls in flight

  void Validate() const;
};

struct RoundResult {
  IterationState state;
  std::vector<ProofAttempt> attempts;  // problem order, then sample order
  int newly_proved = 0;
};

// One round over the unproved problems. The pool is read-only during the
// round; proofs verified now become examples for the next round. Verifier
// and backend failures are recorded per problem and never abort the round.
// BudgetExceeded propagates.
RoundResult RunIteration(const IterationState& state, const std::vector<Problem>& problems,
                         genclient::Client& client, Verifier& verifier,
                         const trainprep::Tokenizer& tokenizer, const HarnessConfig& config);

struct RoundSummary {
  int round = 0;
  int newly_proved = 0;
  int cumulative_proved = 0;
  std::int64_t generations = 0;

  friend bool operator==(const RoundSummary&, const RoundSummary&) = default;
};

struct ProblemOutcome {
  std::string name;
  bool proved = false;
  int first_round = 0;  // 0 when unproved
  int sample_index = -1;
  std::string proof;

  friend bool operator==(const ProblemOutcome&, const ProblemOutcome&) = default;
};

struct HarnessReport {
  int problem_count = 0;
  std::vector<RoundSummary> rounds;
  std::vector<ProblemOutcome> problems;  // input order
  std::int64_t generations = 0;

  double CumulativeRate(std::size_t after_rounds) const;
  double PassRate() const;
  std::string SummaryTable() const;

  friend bool operator==(const HarnessReport&, const HarnessReport&) = default;
};

struct HarnessRun {
  HarnessReport report;
  std::vector<ProofAttempt> attempts;
  IterationState final_state;
};

// Rounds until max_rounds, until a round proves nothing new, or until
// everything is proved.
HarnessRun RunIterative(const std::vector<Problem>& problems, std::vector<PoolExample> seed_pool,
                        genclient::Client& client, Verifier& verifier,
                        const trainprep::Tokenizer& tokenizer, const HarnessConfig& config);

// JSONL: one {"kind": "round", ...} line per round, then one
// {"kind": "problem", ...} line per problem.
void WriteHarnessReport(const std::filesystem::path& path, const HarnessReport& report);
// Re-verifies every proved entry against `problems` with `verifier`;
// a stale verdict is PreconditionViolated.
HarnessReport LoadHarnessReport(const std::filesystem::path& path,
                                const std::vector<Problem>& problems, Verifier& verifier);

}  // namespace leanbridge::prover

#endif  // LEANBRIDGE_PROVER_HARNESS_H_
