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

#ifndef LEANBRIDGE_TRAINPREP_PACKING_H_
#define LEANBRIDGE_TRAINPREP_PACKING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "leanbridge/bootstrap/bootstrap.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/trainprep/tokenizer.h"

namespace leanbridge::trainprep {

// One training record before packing.
struct SourceRecord {
  std::string name;
  std::string nl;
  std::string statement;
  std::string target;   // FL_i
  std::string example;  // FL text shown when this record is an example
  int difficulty = 0;
};

struct PackedRecord {
  std::string name;
  std::string instruction;  // examples i-k .. i-1, then record i's own sections
  std::string target;
  std::int64_t example_count = 0;
  std::int64_t token_count = 0;  // Count(instruction) + Count(target)
  int difficulty = 0;

  friend bool operator==(const PackedRecord&, const PackedRecord&) = default;
};

// {"instruction", "target", "example_count", "difficulty", "name",
// "token_count"}.
Json ToJson(const PackedRecord& r);
PackedRecord PackedFromJson(const Json& j);

// Stable ascending sort by difficulty.
std::vector<SourceRecord> CurriculumSort(std::vector<SourceRecord> records);

struct PackOptions {
  std::int64_t context_budget = 8192;  // C
  bool nl_guidance = true;             // NL sections in the instruction
  bool block = true;                   // false: never add examples
};

// Treats `ring` as circular: the examples for record i are the longest run
// of whole predecessors i-1, i-2, ... (wrapping, never i itself) whose
// tokens fit in C together with record i.
class RingPacker {
 public:
  // Keeps references to `ring` and `tokenizer`.
  RingPacker(const std::vector<SourceRecord>& ring, const Tokenizer& tokenizer,
             PackOptions options);

  // Header, own sections and target of record i.
  std::int64_t OwnCost(std::size_t i) const { return own_cost_.at(i); }
  // Record i rendered as an in-context example.
  std::int64_t ExampleCost(std::size_t i) const { return example_cost_.at(i); }

  // Throws RecordExceedsBudget when record i alone exceeds C.
  PackedRecord Pack(std::size_t i) const;

 private:
  std::string Instruction(std::size_t i, std::size_t k) const;

  const std::vector<SourceRecord>& ring_;
  const Tokenizer& tokenizer_;
  PackOptions options_;
  std::vector<std::int64_t> own_cost_;
  std::vector<std::int64_t> example_cost_;
};

PackedRecord PackBlock(const std::vector<SourceRecord>& sorted_records, std::size_t i,
                       const Tokenizer& tokenizer, const PackOptions& options);

struct EmitConfig {
  PackOptions pack;
  bool curriculum = true;
  bool use_bootstrapped = true;       // target is the commented proof
  bool bootstrapped_examples = true;  // examples show the commented proof
  std::size_t parallelism = 4;
};

struct SkippedRecord {
  std::string name;
  std::int64_t tokens = 0;  // record alone
  std::int64_t budget = 0;

  Json ToJson() const;
};

struct TrainingSet {
  std::vector<PackedRecord> records;  // curriculum order
  std::vector<SkippedRecord> skipped;
};

// Difficulty is the tactic-step count of the raw proof. Records that cannot
// fit C on their own are reported in `skipped` and left out of the ring.
SourceRecord ToSourceRecord(const bootstrap::ObtRecord& r, bool use_bootstrapped,
                            bool bootstrapped_examples);
TrainingSet EmitTrainingSet(const std::vector<bootstrap::ObtRecord>& obt,
                            const Tokenizer& tokenizer, const EmitConfig& config);

}  // namespace leanbridge::trainprep

#endif  // LEANBRIDGE_TRAINPREP_PACKING_H_
