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

#ifndef LEANBRIDGE_CORPUS_THEOREM_H_
#define LEANBRIDGE_CORPUS_THEOREM_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "leanbridge/common/jsonl.h"

namespace leanbridge::corpus {

struct Provenance {
  std::string file_path;  // repository URL
  std::string commit;     // 40-hex commit id
};

struct TheoremRecord {
  std::string name;
  // Declaration text up to and including the `:=` (and a following `by`).
  std::string statement;
  // Full declaration: statement followed by the proof body.
  std::string proof;
  std::string file_path;
  std::string commit;
  int difficulty = 0;

  friend bool operator==(const TheoremRecord&, const TheoremRecord&) = default;
};

Json ToJson(const TheoremRecord& r);
// Accepts the LeanDojo-style export; `difficulty` is recomputed when absent.
TheoremRecord TheoremFromJson(const Json& j);

struct SkippedDeclaration {
  std::string name;
  std::size_t offset;
  std::string reason;
};

struct ExtractionResult {
  std::vector<TheoremRecord> records;
  std::vector<SkippedDeclaration> skipped;
};

// One record per `theorem`/`lemma` declaration in source order, qualified by
// the enclosing `namespace` blocks. Declarations whose body boundary cannot
// be found are reported in `skipped`. Throws on lexer errors.
ExtractionResult ExtractTheorems(std::string_view source,
                                 const Provenance& provenance);

}  // namespace leanbridge::corpus

#endif  // LEANBRIDGE_CORPUS_THEOREM_H_
