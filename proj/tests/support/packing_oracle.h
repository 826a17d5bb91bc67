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

#ifndef LEANBRIDGE_TESTS_SUPPORT_PACKING_ORACLE_H_
#define LEANBRIDGE_TESTS_SUPPORT_PACKING_ORACLE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "leanbridge/common/random.h"
#include "leanbridge/trainprep/packing.h"

namespace leanbridge::testing {

// Records whose fields are runs of the word "w", so whitespace token counts
// are known without running a tokenizer.
struct WordCounts {
  int nl, statement, fl;
};

inline std::string Words(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += i ? " w" : "w";
  return s;
}

inline trainprep::SourceRecord WordRecord(const std::string& name, WordCounts c, int difficulty) {
  return {name, Words(c.nl), Words(c.statement), Words(c.fl), Words(c.fl), difficulty};
}

// Whitespace token counts of the fixed prompt text, counted by hand:
// 19-word header line, 8-word NL marker, 6-word statement marker, 7-word
// proof marker.
inline constexpr std::int64_t kHeaderWords = 19;
inline constexpr std::int64_t kMarkerWords = 8 + 6 + 7;

struct OracleResult {
  std::int64_t k;
  std::int64_t tokens;
};

// Greedy ring walk over precomputed counts.
inline OracleResult GreedyOracle(const std::vector<WordCounts>& counts, std::size_t i,
                                 std::int64_t budget) {
  const std::int64_t n = static_cast<std::int64_t>(counts.size());
  auto body = [&](std::int64_t j) {
    const auto& c = counts[static_cast<std::size_t>(j)];
    return static_cast<std::int64_t>(c.nl + c.statement + c.fl);
  };
  const std::int64_t self = static_cast<std::int64_t>(i);
  std::int64_t tokens = kHeaderWords + kMarkerWords + body(self);
  if (tokens > budget) return {-1, tokens};
  std::int64_t k = 0;
  for (std::int64_t j = self - 1; k < n - 1; --j) {
    const std::int64_t idx = ((j % n) + n) % n;
    if (tokens + kMarkerWords + body(idx) > budget) break;
    tokens += kMarkerWords + body(idx);
    ++k;
  }
  return {k, tokens};
}

inline std::vector<WordCounts> RandomCounts(Rng& rng, std::size_t n) {
  std::vector<WordCounts> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({1 + static_cast<int>(rng.UniformIndex(80)),
                   1 + static_cast<int>(rng.UniformIndex(30)),
                   1 + static_cast<int>(rng.UniformIndex(120))});
  }
  return out;
}

}  // namespace leanbridge::testing

#endif  // LEANBRIDGE_TESTS_SUPPORT_PACKING_ORACLE_H_
