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

#include "leanbridge/corpus/tactics.h"

#include <string>

#include "leanbridge/corpus/lexer.h"
#include "source_lines.h"

namespace leanbridge::corpus {

namespace {

// Top-level `;` separators on masked[begin, end) that are followed by more
// code on the same line. `<;>` is a combinator, not a separator.
int CountSeparators(std::string_view masked, std::size_t begin,
                    std::size_t end, int& depth) {
  int count = 0;
  for (std::size_t i = begin; i < end;) {
    std::size_t width;
    int delta = internal::BracketDelta(masked, i, width);
    if (delta != 0) {
      depth = std::max(0, depth + delta);
      i += width;
      continue;
    }
    if (masked[i] == ';' && depth == 0 &&
        !(i > 0 && masked[i - 1] == '<' && i + 1 < end && masked[i + 1] == '>')) {
      std::size_t j = i + 1;
      while (j < end && internal::IsBlank(masked[j])) ++j;
      if (j < end) ++count;
    }
    ++i;
  }
  return count;
}

}  // namespace

int CountTacticSteps(std::string_view proof) {
  LexLean(proof);  // surface lexer errors
  const std::string masked = MaskNonCode(proof);
  const std::size_t n = masked.size();

  std::size_t body = 0;
  const std::size_t assign = internal::FindTopLevelAssign(masked, 0, n);
  if (assign != std::string_view::npos) body = assign;

  std::size_t tactics = internal::FindLeadingBy(masked, body, n);
  if (tactics == std::string_view::npos) {
    std::size_t first = body;
    while (first < n && internal::IsBlank(masked[first])) ++first;
    if (first == n) return 0;
    if (assign != std::string_view::npos) return 1;  // term mode
    tactics = body;
  }

  // Whether the first tactic shares a line with `by`.
  bool inline_first = false;
  {
    std::size_t i = tactics;
    while (i < n && (masked[i] == ' ' || masked[i] == '\t')) ++i;
    inline_first = tactics > 0 && i < n && masked[i] != '\n' &&
                   masked[i] != '\r';
  }

  const auto lines = internal::SplitLines(masked);
  int steps = 0;
  int depth = 0;
  bool seen_first = false;
  std::size_t base = std::string_view::npos;
  for (const auto& line : lines) {
    if (line.end < tactics) continue;
    const std::size_t from = std::max(line.begin, tactics);
    std::size_t first = from;
    while (first < line.end && internal::IsBlank(masked[first])) ++first;
    if (first >= line.end) continue;

    bool top_level = false;
    if (!seen_first) {
      seen_first = true;
      top_level = true;
      if (!(inline_first && from == tactics)) base = line.indent;
    } else if (depth > 0) {
      top_level = false;
    } else if (base == std::string_view::npos) {
      base = line.indent;
      top_level = true;
    } else if (line.indent == base) {
      top_level = true;
    } else if (line.indent < base) {
      break;
    }
    int separators = CountSeparators(masked, first, line.end, depth);
    if (top_level) steps += 1 + separators;
  }
  return steps;
}

}  // namespace leanbridge::corpus
