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

#include "leanbridge/informalize/quality.h"

#include <algorithm>
#include <map>

#include "leanbridge/common/error.h"
#include "leanbridge/common/text.h"

namespace leanbridge::informalize {

void QualityLimits::Validate() const {
  if (max_tokens <= 0 || repetition_ngram <= 0 || !(repetition_ratio_max > 0.0) ||
      repetition_ratio_max > 1.0) {
    throw Error(ErrorCode::kConfigInvalid,
                "quality limits need max_tokens > 0, repetition_ngram > 0 and "
                "repetition_ratio_max in (0, 1]");
  }
}

RepetitionStats MeasureRepetition(std::string_view text, int n,
                                  const trainprep::Tokenizer& tokenizer) {
  const std::vector<std::string> tokens = tokenizer.Tokenize(text);
  RepetitionStats stats;
  if (n <= 0 || tokens.size() < static_cast<std::size_t>(n)) return stats;
  std::map<std::vector<std::string>, std::int64_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    auto& c = counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
    stats.top_count = std::max(stats.top_count, ++c);
    ++stats.total;
  }
  stats.top_ratio = static_cast<double>(stats.top_count) / static_cast<double>(stats.total);
  return stats;
}

QualityVerdict QualityCheck(std::string_view nl_text, const QualityLimits& limits,
                            const trainprep::Tokenizer& tokenizer) {
  QualityVerdict v;
  auto fail = [&](const char* reason) {
    v.pass = false;
    v.reasons.emplace_back(reason);
  };
  if (Trim(nl_text).empty()) {
    fail(kEmptyText);
    fail(kMissingSection);
    return v;
  }
  if (tokenizer.Count(nl_text) > limits.max_tokens) fail(kOverlength);
  const RepetitionStats rep = MeasureRepetition(nl_text, limits.repetition_ngram, tokenizer);
  if (rep.top_count >= 2 && rep.top_ratio > limits.repetition_ratio_max) fail(kRepetition);
  for (const auto& marker : limits.required_sections) {
    if (nl_text.find(marker) == std::string_view::npos) {
      fail(kMissingSection);
      break;
    }
  }
  return v;
}

}  // namespace leanbridge::informalize
