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

#include "leanbridge/corpus/lean3.h"

#include <cctype>

#include "leanbridge/corpus/lexer.h"
#include "source_lines.h"

namespace leanbridge::corpus {

namespace {

bool IsWordAt(std::string_view text, std::size_t pos, std::string_view word) {
  if (text.substr(pos, word.size()) != word) return false;
  if (pos > 0 && internal::IsIdentChar(text[pos - 1])) return false;
  const std::size_t after = pos + word.size();
  return after >= text.size() || !internal::IsIdentChar(text[after]);
}

std::string Excerpt(std::string_view source, std::size_t offset) {
  std::size_t end = source.find('\n', offset);
  if (end == std::string_view::npos) end = source.size();
  return std::string(source.substr(offset, std::min<std::size_t>(end - offset, 80)));
}

}  // namespace

std::string_view Lean3PatternName(Lean3Pattern p) {
  switch (p) {
    case Lean3Pattern::kBeginEndBlock: return "begin-end-block";
    case Lean3Pattern::kLean3Import: return "lean3-import";
    case Lean3Pattern::kOpenLocale: return "open-locale";
  }
  return "unknown";
}

std::vector<Lean3Finding> DetectLean3Artifacts(std::string_view text) {
  std::vector<Lean3Finding> findings;
  const std::string masked = MaskNonCode(text);
  const auto lines = internal::SplitLines(masked);

  for (const auto& line : lines) {
    if (line.words.empty()) continue;
    if (line.words[0].text == "import") {
      for (std::size_t i = 1; i < line.words.size(); ++i) {
        const auto& w = line.words[i];
        if (std::islower(static_cast<unsigned char>(w.text.front()))) {
          findings.push_back(
              {Lean3Pattern::kLean3Import, w.offset, Excerpt(text, w.offset)});
        }
      }
    }
    for (const auto& w : line.words) {
      if (w.text == "open_locale") {
        findings.push_back(
            {Lean3Pattern::kOpenLocale, w.offset, Excerpt(text, w.offset)});
      }
    }
  }

  // `begin` opens a Lean 3 tactic block only when an `end` follows it.
  std::size_t last_end = std::string_view::npos;
  for (std::size_t i = masked.size(); i-- > 0;) {
    if (IsWordAt(masked, i, "end")) {
      last_end = i;
      break;
    }
  }
  if (last_end != std::string_view::npos) {
    for (std::size_t i = 0; i < last_end; ++i) {
      if (IsWordAt(masked, i, "begin")) {
        findings.push_back(
            {Lean3Pattern::kBeginEndBlock, i, Excerpt(text, i)});
      }
    }
  }
  std::sort(findings.begin(), findings.end(),
            [](const Lean3Finding& a, const Lean3Finding& b) {
              return a.offset < b.offset;
            });
  return findings;
}

}  // namespace leanbridge::corpus
