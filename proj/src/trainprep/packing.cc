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

#include "leanbridge/trainprep/packing.h"

#include <algorithm>
#include <map>

#include "leanbridge/common/error.h"
#include "leanbridge/common/parallel.h"
#include "leanbridge/corpus/tactics.h"
#include "leanbridge/genclient/template.h"

namespace leanbridge::trainprep {

Json ToJson(const PackedRecord& r) {
  return Json{{"instruction", r.instruction}, {"target", r.target},
              {"example_count", r.example_count}, {"difficulty", r.difficulty},
              {"name", r.name}, {"token_count", r.token_count}};
}

PackedRecord PackedFromJson(const Json& j) {
  try {
    return PackedRecord{j.at("name").get<std::string>(), j.at("instruction").get<std::string>(),
                        j.at("target").get<std::string>(), j.at("example_count").get<std::int64_t>(),
                        j.at("token_count").get<std::int64_t>(), j.at("difficulty").get<int>()};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed packed record: ") + e.what());
  }
}

std::vector<SourceRecord> CurriculumSort(std::vector<SourceRecord> records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const SourceRecord& a, const SourceRecord& b) {
                     return a.difficulty < b.difficulty;
                   });
  return records;
}

RingPacker::RingPacker(const std::vector<SourceRecord>& ring, const Tokenizer& tokenizer,
                       PackOptions options)
    : ring_(ring), tokenizer_(tokenizer), options_(options) {
  if (options_.context_budget <= 0) {
    throw Error(ErrorCode::kConfigInvalid, "context budget must be positive");
  }
  // Each piece ends in a newline, so with a whitespace-additive tokenizer the
  // instruction's count is the sum of its pieces' counts.
  own_cost_.reserve(ring_.size());
  example_cost_.reserve(ring_.size());
  for (std::size_t i = 0; i < ring_.size(); ++i) {
    own_cost_.push_back(tokenizer_.Count(Instruction(i, 0)) + tokenizer_.Count(ring_[i].target));
    const auto& r = ring_[i];
    example_cost_.push_back(tokenizer_.Count(
        genclient::FormatProofExample(r.nl, r.statement, r.example, options_.nl_guidance)));
  }
}

std::string RingPacker::Instruction(std::size_t i, std::size_t k) const {
  const std::size_t n = ring_.size();
  std::string examples;
  for (std::size_t step = k; step >= 1; --step) {
    const auto& e = ring_[(i + n - step) % n];
    examples += genclient::FormatProofExample(e.nl, e.statement, e.example, options_.nl_guidance);
  }
  std::map<std::string, std::string> bindings = {{"examples", examples},
                                                 {"statement", ring_[i].statement}};
  if (options_.nl_guidance) bindings["nl"] = ring_[i].nl;
  return genclient::ProofWritingTemplate(options_.nl_guidance).Render(bindings);
}

PackedRecord RingPacker::Pack(std::size_t i) const {
  const std::size_t n = ring_.size();
  const std::int64_t budget = options_.context_budget;
  const SourceRecord& r = ring_.at(i);
  if (own_cost_[i] > budget) {
    throw Error(ErrorCode::kRecordExceedsBudget,
                "record '" + r.name + "' needs " + std::to_string(own_cost_[i]) +
                    " tokens on its own, budget is " + std::to_string(budget));
  }
  std::int64_t total = own_cost_[i];
  std::size_t k = 0;
  if (options_.block) {
    while (k + 1 < n) {
      const std::int64_t next = example_cost_[(i + n - (k + 1)) % n];
      if (total + next > budget) break;
      total += next;
      ++k;
    }
  }
  PackedRecord out;
  out.name = r.name;
  out.target = r.target;
  out.difficulty = r.difficulty;
  for (;;) {
    out.instruction = Instruction(i, k);
    out.token_count = tokenizer_.Count(out.instruction) + tokenizer_.Count(out.target);
    // Only a tokenizer that is not additive at newlines can overshoot here;
    // shed the oldest example until the record fits.
    if (out.token_count <= budget || k == 0) break;
    --k;
  }
  out.example_count = static_cast<std::int64_t>(k);
  return out;
}

PackedRecord PackBlock(const std::vector<SourceRecord>& sorted_records, std::size_t i,
                       const Tokenizer& tokenizer, const PackOptions& options) {
  return RingPacker(sorted_records, tokenizer, options).Pack(i);
}

Json SkippedRecord::ToJson() const {
  return Json{{"name", name}, {"tokens", tokens}, {"budget", budget},
              {"reason", std::string(ErrorCodeName(ErrorCode::kRecordExceedsBudget))}};
}

SourceRecord ToSourceRecord(const bootstrap::ObtRecord& r, bool use_bootstrapped,
                            bool bootstrapped_examples) {
  return SourceRecord{r.name,
                      r.generated_informal_statement_and_proof,
                      r.statement,
                      use_bootstrapped ? r.commented_proof : r.proof,
                      bootstrapped_examples ? r.commented_proof : r.proof,
                      corpus::CountTacticSteps(r.proof)};
}

TrainingSet EmitTrainingSet(const std::vector<bootstrap::ObtRecord>& obt,
                            const Tokenizer& tokenizer, const EmitConfig& config) {
  std::vector<SourceRecord> all;
  all.reserve(obt.size());
  for (const auto& r : obt) {
    all.push_back(ToSourceRecord(r, config.use_bootstrapped, config.bootstrapped_examples));
  }
  if (config.curriculum) all = CurriculumSort(std::move(all));

  TrainingSet out;
  std::vector<SourceRecord> ring;
  {
    // Own cost does not depend on the rest of the ring.
    const RingPacker probe(all, tokenizer, config.pack);
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (probe.OwnCost(i) > config.pack.context_budget) {
        out.skipped.push_back({all[i].name, probe.OwnCost(i), config.pack.context_budget});
      } else {
        ring.push_back(std::move(all[i]));
      }
    }
  }
  const RingPacker packer(ring, tokenizer, config.pack);
  out.records.resize(ring.size());
  ParallelFor(ring.size(), std::max<std::size_t>(1, config.parallelism),
              [&](std::size_t i) { out.records[i] = packer.Pack(i); });
  return out;
}

}  // namespace leanbridge::trainprep
