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

#ifndef LEANBRIDGE_INFORMALIZE_INFORMALIZE_H_
#define LEANBRIDGE_INFORMALIZE_INFORMALIZE_H_

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "leanbridge/common/jsonl.h"
#include "leanbridge/corpus/theorem.h"
#include "leanbridge/genclient/client.h"
#include "leanbridge/informalize/quality.h"
#include "leanbridge/retrieval/contrastive.h"
#include "leanbridge/retrieval/index.h"
#include "leanbridge/retrieval/provider.h"

namespace leanbridge::informalize {

// An NL-FL aligned example shown to the model.
struct Example {
  std::string id;  // unique within a pool
  std::string nl;  // natural language statement and proof
  std::string fl_statement;
  std::string fl_proof;

  friend bool operator==(const Example&, const Example&) = default;
};

Json ToJson(const Example& e);
Example ExampleFromJson(const Json& j);

// Which pool text the index is built over. The query is always the record's
// Lean4 statement.
enum class ExampleKey { kNl, kFlStatement };

// top_k retrieval over a fixed example pool.
class ExampleSelector {
 public:
  // Throws EmptyInput for an empty pool, InvalidArgument on duplicate ids.
  ExampleSelector(std::vector<Example> pool,
                  std::shared_ptr<const retrieval::EmbeddingProvider> embedder,
                  const retrieval::ProjectionHead& head,
                  ExampleKey key = ExampleKey::kNl);

  // min(k, pool size) examples, most similar first.
  std::vector<Example> Select(const corpus::TheoremRecord& record, std::size_t k) const;
  std::vector<retrieval::ScoredId> Rank(const std::string& fl_statement,
                                        std::size_t k) const;

  const std::vector<Example>& pool() const { return pool_; }

 private:
  std::vector<Example> pool_;
  std::shared_ptr<const retrieval::EmbeddingProvider> embedder_;
  retrieval::SimilarityIndex index_;
};

struct InformalizationResult {
  std::string theorem_name;
  std::string nl_statement_and_proof;  // last attempt's text
  std::vector<std::string> examples_used;
  int attempts = 0;
  bool pass = false;
  std::vector<std::string> reasons;  // of the final attempt
  // Reason codes per attempt; backend failures add "BACKEND_ERROR: <msg>".
  std::vector<std::vector<std::string>> attempt_log;

  friend bool operator==(const InformalizationResult&,
                         const InformalizationResult&) = default;
};

// Keys "Name" and "Generated_informal_statement_and_proof" follow the OBT
// record; the rest are pipeline metadata.
Json ToJson(const InformalizationResult& r);
InformalizationResult InformalizationFromJson(const Json& j);

struct GenerationSettings {
  int max_new_tokens = 2048;
  double temperature = 0.7;
};

std::string RenderInformalizationPrompt(const corpus::TheoremRecord& record,
                                        const std::vector<Example>& examples);

// Queries until a reply passes QualityCheck or max_attempts is reached.
// Backend errors count as failed attempts; BudgetExceeded propagates.
InformalizationResult InformalizeTheorem(const corpus::TheoremRecord& record,
                                         const std::vector<Example>& examples,
                                         genclient::Client& client,
                                         const QualityLimits& limits,
                                         const trainprep::Tokenizer& tokenizer,
                                         int max_attempts,
                                         const GenerationSettings& settings = {});

struct CorpusConfig {
  std::size_t examples_per_prompt = 3;
  int max_attempts = 3;
  std::size_t parallelism = 4;
  QualityLimits limits;
  GenerationSettings generation;
  std::filesystem::path checkpoint;  // empty disables checkpointing
  bool resume = false;
  // With resume, discard an unreadable checkpoint instead of failing.
  bool restart_on_corrupt = false;
};

// One result per record in input order. Results are appended to the
// checkpoint in input order, batch by batch, so an interrupted run resumes
// exactly where it stopped. A resumed checkpoint must match the input
// prefix by name (CheckpointCorrupt otherwise). A stored pass that no longer
// satisfies `limits` ends the reusable prefix and is recomputed.
std::vector<InformalizationResult> InformalizeCorpus(
    const std::vector<corpus::TheoremRecord>& records, const ExampleSelector& selector,
    genclient::Client& client, const trainprep::Tokenizer& tokenizer,
    const CorpusConfig& config);

// Re-checks pass verdicts on load; a pass that violates `limits` is an error.
std::vector<InformalizationResult> LoadInformalDataset(
    const std::filesystem::path& path, const QualityLimits& limits,
    const trainprep::Tokenizer& tokenizer);

}  // namespace leanbridge::informalize

#endif  // LEANBRIDGE_INFORMALIZE_INFORMALIZE_H_
