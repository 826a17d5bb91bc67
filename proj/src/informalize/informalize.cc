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

#include "leanbridge/informalize/informalize.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "leanbridge/common/error.h"
#include "leanbridge/common/parallel.h"
#include "leanbridge/genclient/template.h"

namespace leanbridge::informalize {
namespace {

std::string FormatExamples(const std::vector<Example>& examples) {
  std::string out;
  for (const auto& e : examples) {
    out += std::string(genclient::kStatementSection) + "\n" + e.fl_statement + "\n" +
           genclient::kProofSection + "\n" + e.fl_proof + "\n" +
           genclient::kInformalSection + "\n" + e.nl + "\n\n";
  }
  return out;
}

std::vector<std::string> StringList(const Json& j) {
  return j.get<std::vector<std::string>>();
}

}  // namespace

Json ToJson(const Example& e) {
  return Json{{"id", e.id}, {"nl", e.nl}, {"fl_statement", e.fl_statement},
              {"fl_proof", e.fl_proof}};
}

Example ExampleFromJson(const Json& j) {
  try {
    return Example{j.at("id").get<std::string>(), j.at("nl").get<std::string>(),
                   j.at("fl_statement").get<std::string>(),
                   j.value("fl_proof", j.at("fl_statement").get<std::string>())};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed example: ") + e.what());
  }
}

ExampleSelector::ExampleSelector(std::vector<Example> pool,
                                 std::shared_ptr<const retrieval::EmbeddingProvider> embedder,
                                 const retrieval::ProjectionHead& head, ExampleKey key)
    : pool_(std::move(pool)), embedder_(std::move(embedder)) {
  if (pool_.empty()) throw Error(ErrorCode::kEmptyInput, "example pool is empty");
  std::set<std::string> ids;
  std::vector<std::string> texts;
  for (const auto& e : pool_) {
    if (!ids.insert(e.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate example id '" + e.id + "'");
    }
    texts.push_back(key == ExampleKey::kNl ? e.nl : e.fl_statement);
  }
  const auto vectors = embedder_->Embed(texts);
  std::vector<std::pair<std::string, retrieval::EmbeddingVector>> corpus;
  for (std::size_t i = 0; i < pool_.size(); ++i) corpus.emplace_back(pool_[i].id, vectors[i]);
  index_ = retrieval::SimilarityIndex::Build(corpus, head);
}

std::vector<retrieval::ScoredId> ExampleSelector::Rank(const std::string& fl_statement,
                                                       std::size_t k) const {
  return index_.TopK(embedder_->Embed({fl_statement}).front(), k);
}

std::vector<Example> ExampleSelector::Select(const corpus::TheoremRecord& record,
                                             std::size_t k) const {
  std::vector<Example> out;
  for (const auto& scored : Rank(record.statement, k)) {
    out.push_back(*std::find_if(pool_.begin(), pool_.end(),
                                [&](const Example& e) { return e.id == scored.id; }));
  }
  return out;
}

Json ToJson(const InformalizationResult& r) {
  return Json{{"Name", r.theorem_name},
              {"Generated_informal_statement_and_proof", r.nl_statement_and_proof},
              {"examples_used", r.examples_used},
              {"attempts", r.attempts},
              {"verdict", r.pass ? "pass" : "fail"},
              {"reasons", r.reasons},
              {"attempt_log", r.attempt_log}};
}

InformalizationResult InformalizationFromJson(const Json& j) {
  try {
    InformalizationResult r;
    r.theorem_name = j.at("Name").get<std::string>();
    r.nl_statement_and_proof = j.at("Generated_informal_statement_and_proof").get<std::string>();
    r.examples_used = StringList(j.at("examples_used"));
    r.attempts = j.at("attempts").get<int>();
    const std::string verdict = j.at("verdict").get<std::string>();
    if (verdict != "pass" && verdict != "fail") {
      throw Error(ErrorCode::kInvalidArgument, "verdict must be pass or fail");
    }
    r.pass = verdict == "pass";
    r.reasons = StringList(j.at("reasons"));
    for (const auto& a : j.at("attempt_log")) r.attempt_log.push_back(StringList(a));
    if (r.attempts < 1 || static_cast<int>(r.attempt_log.size()) != r.attempts) {
      throw Error(ErrorCode::kInvalidArgument, "attempt count does not match attempt log");
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed informalization result: ") + e.what());
  }
}

std::string RenderInformalizationPrompt(const corpus::TheoremRecord& record,
                                        const std::vector<Example>& examples) {
  return genclient::InformalizationTemplate().Render({{"examples", FormatExamples(examples)},
                                                      {"statement", record.statement},
                                                      {"proof", record.proof}});
}

InformalizationResult InformalizeTheorem(const corpus::TheoremRecord& record,
                                         const std::vector<Example>& examples,
                                         genclient::Client& client,
                                         const QualityLimits& limits,
                                         const trainprep::Tokenizer& tokenizer,
                                         int max_attempts,
                                         const GenerationSettings& settings) {
  if (max_attempts < 1) throw Error(ErrorCode::kInvalidArgument, "max_attempts must be >= 1");
  InformalizationResult result;
  result.theorem_name = record.name;
  for (const auto& e : examples) result.examples_used.push_back(e.id);

  genclient::GenerationRequest request;
  request.prompt = RenderInformalizationPrompt(record, examples);
  request.max_new_tokens = settings.max_new_tokens;
  request.temperature = settings.temperature;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    request.request_id = "informalize:" + record.name + ":" + std::to_string(attempt);
    result.attempts = attempt;
    try {
      result.nl_statement_and_proof = client.Complete(request).samples.front();
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kBudgetExceeded) throw;
      result.nl_statement_and_proof.clear();
      result.pass = false;
      result.reasons = {std::string(kBackendError) + ": " + e.what()};
      result.attempt_log.push_back(result.reasons);
      continue;
    }
    const QualityVerdict v = QualityCheck(result.nl_statement_and_proof, limits, tokenizer);
    result.pass = v.pass;
    result.reasons = v.reasons;
    result.attempt_log.push_back(v.reasons);
    if (v.pass) break;
  }
  return result;
}

std::vector<InformalizationResult> InformalizeCorpus(
    const std::vector<corpus::TheoremRecord>& records, const ExampleSelector& selector,
    genclient::Client& client, const trainprep::Tokenizer& tokenizer,
    const CorpusConfig& config) {
  config.limits.Validate();
  std::vector<InformalizationResult> results;
  const bool checkpointing = !config.checkpoint.empty();

  if (checkpointing && config.resume && std::filesystem::exists(config.checkpoint)) {
    std::vector<Json> lines;
    bool corrupt = false;
    std::string why;
    try {
      lines = ReadJsonl(config.checkpoint);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        InformalizationResult r = InformalizationFromJson(lines[i]);
        if (i >= records.size() || r.theorem_name != records[i].name) {
          throw Error(ErrorCode::kCheckpointCorrupt,
                      "checkpoint line " + std::to_string(i + 1) + " is for '" +
                          r.theorem_name + "', input has '" +
                          (i < records.size() ? records[i].name : std::string("<end>")) + "'");
        }
        if (r.pass && !QualityCheck(r.nl_statement_and_proof, config.limits, tokenizer).pass) {
          break;  // limits tightened since this line was written
        }
        results.push_back(std::move(r));
      }
    } catch (const Error& e) {
      corrupt = true;
      why = e.what();
    }
    if (corrupt) {
      if (!config.restart_on_corrupt) {
        throw Error(ErrorCode::kCheckpointCorrupt,
                    "refusing to resume from " + config.checkpoint.string() + ": " + why +
                        " (pass the restart flag to start over)");
      }
      results.clear();
    }
    if (results.size() != lines.size() || corrupt) {
      std::vector<Json> keep;
      for (const auto& r : results) keep.push_back(ToJson(r));
      WriteJsonl(config.checkpoint, keep);
    }
  } else if (checkpointing) {
    WriteFileAtomic(config.checkpoint, "");
  }

  const std::size_t batch = std::max<std::size_t>(1, config.parallelism);
  for (std::size_t start = results.size(); start < records.size(); start += batch) {
    const std::size_t n = std::min(batch, records.size() - start);
    std::vector<InformalizationResult> chunk(n);
    ParallelFor(n, batch, [&](std::size_t i) {
      const auto& record = records[start + i];
      chunk[i] = InformalizeTheorem(record, selector.Select(record, config.examples_per_prompt),
                                    client, config.limits, tokenizer, config.max_attempts,
                                    config.generation);
    });
    for (auto& r : chunk) {
      if (checkpointing) AppendJsonlLine(config.checkpoint, ToJson(r));
      results.push_back(std::move(r));
    }
  }
  return results;
}

std::vector<InformalizationResult> LoadInformalDataset(const std::filesystem::path& path,
                                                       const QualityLimits& limits,
                                                       const trainprep::Tokenizer& tokenizer) {
  std::vector<InformalizationResult> out;
  const auto lines = ReadJsonl(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    InformalizationResult r = InformalizationFromJson(lines[i]);
    if (r.pass) {
      const QualityVerdict v = QualityCheck(r.nl_statement_and_proof, limits, tokenizer);
      if (!v.pass) {
        throw Error(ErrorCode::kPreconditionViolated,
                    path.string() + ":" + std::to_string(i + 1) + ": pass verdict for '" +
                        r.theorem_name + "' violates the configured limits (" +
                        v.reasons.front() + ")");
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace leanbridge::informalize
