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

#ifndef LEANBRIDGE_INFORMALIZE_QUALITY_H_
#define LEANBRIDGE_INFORMALIZE_QUALITY_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "leanbridge/trainprep/tokenizer.h"

namespace leanbridge::informalize {

// Reason codes as written to datasets.
inline constexpr char kOverlength[] = "OVERLENGTH";
inline constexpr char kRepetition[] = "REPETITION";
inline constexpr char kMissingSection[] = "MISSING_SECTION";
inline constexpr char kEmptyText[] = "EMPTY";
inline constexpr char kBackendError[] = "BACKEND_ERROR";

struct QualityLimits {
  std::int64_t max_tokens = 1500;
  int repetition_ngram = 4;
  double repetition_ratio_max = 0.2;
  std::vector<std::string> required_sections = {"Statement:", "Proof:"};

  // Throws ConfigInvalid unless all limits are positive.
  void Validate() const;
};

struct QualityVerdict {
  bool pass = true;
  std::vector<std::string> reasons;  // in check order, no duplicates
};

// Share of the most frequent n-gram among all n-grams of the token stream,
// and that n-gram's count. Zero when there are fewer than n tokens.
struct RepetitionStats {
  double top_ratio = 0.0;
  std::int64_t top_count = 0;
  std::int64_t total = 0;
};
RepetitionStats MeasureRepetition(std::string_view text, int n,
                                  const trainprep::Tokenizer& tokenizer);

// REPETITION fires when the top n-gram occurs at least twice and its share
// exceeds repetition_ratio_max.
QualityVerdict QualityCheck(std::string_view nl_text, const QualityLimits& limits,
                            const trainprep::Tokenizer& tokenizer);

}  // namespace leanbridge::informalize

#endif  // LEANBRIDGE_INFORMALIZE_QUALITY_H_
