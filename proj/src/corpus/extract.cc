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

#include <algorithm>
#include <array>

#include "leanbridge/common/error.h"
#include "leanbridge/corpus/lexer.h"
#include "leanbridge/corpus/tactics.h"
#include "leanbridge/corpus/theorem.h"
#include "source_lines.h"

namespace leanbridge::corpus {

namespace {

using internal::Line;
using internal::Word;

constexpr std::array<std::string_view, 7> kModifiers = {
    "private", "protected", "noncomputable", "nonrec",
    "unsafe",  "partial",   "scoped"};

bool IsModifier(std::string_view w) {
  return std::find(kModifiers.begin(), kModifiers.end(), w) != kModifiers.end();
}

// Index of the `theorem`/`lemma` keyword in the line, allowing only
// modifiers and attributes before it; npos otherwise.
std::size_t DeclarationKeyword(const Line& line) {
  bool in_attr = false;
  for (std::size_t i = 0; i < line.words.size(); ++i) {
    std::string_view w = line.words[i].text;
    if (in_attr || w.starts_with("@[")) {
      in_attr = w.find(']') == std::string_view::npos;
      continue;
    }
    if (w == "theorem" || w == "lemma") return i;
    if (!IsModifier(w)) return std::string_view::npos;
  }
  return std::string_view::npos;
}

std::string_view DeclName(std::string_view word) {
  std::size_t cut = word.find_first_of("({[:");
  return word.substr(0, cut);
}

std::string Qualify(const std::vector<std::string>& namespaces,
                    std::string_view name) {
  if (name.starts_with("_root_.")) return std::string(name.substr(7));
  std::string out;
  for (const auto& ns : namespaces) {
    if (ns.empty()) continue;
    out += ns;
    out += '.';
  }
  out += name;
  return out;
}

std::size_t LineStart(std::string_view text, std::size_t offset) {
  if (offset == 0) return 0;
  std::size_t nl = text.rfind('\n', offset - 1);
  return nl == std::string_view::npos ? 0 : nl + 1;
}

// End of the declaration: the last code byte before `boundary`, extended over
// trailing comments that are still indented into the declaration.
std::size_t DeclarationEnd(std::string_view source,
                           const std::vector<LeanToken>& tokens,
                           std::size_t start, std::size_t boundary,
                           std::size_t decl_indent) {
  std::size_t end = start;
  std::size_t last_code = tokens.size();
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const LeanToken& t = tokens[i];
    if (t.begin >= boundary) break;
    if (t.end <= start) continue;
    if (t.kind == TokenKind::kCode || t.kind == TokenKind::kStringLiteral) {
      last_code = i;
    }
  }
  if (last_code == tokens.size()) return start;
  {
    const LeanToken& t = tokens[last_code];
    std::string_view text(source.data() + t.begin,
                          std::min(t.end, boundary) - t.begin);
    while (!text.empty() && internal::IsBlank(text.back())) text.remove_suffix(1);
    end = t.begin + text.size();
  }
  std::size_t code_line = LineStart(source, end);
  for (std::size_t i = last_code + 1; i < tokens.size(); ++i) {
    const LeanToken& t = tokens[i];
    if (t.begin >= boundary) break;
    if (!t.IsComment()) continue;
    const std::size_t line = LineStart(source, t.begin);
    if (line != code_line) {
      std::size_t indent = t.begin - line;
      std::string_view lead = source.substr(line, indent);
      const bool first_on_line =
          lead.find_first_not_of(" \t") == std::string_view::npos;
      if (first_on_line && indent <= decl_indent) break;
    }
    end = t.end;
    code_line = LineStart(source, t.end);
  }
  return end;
}

}  // namespace

Json ToJson(const TheoremRecord& r) {
  return Json{{"name", r.name},           {"statement", r.statement},
              {"proof", r.proof},         {"file_path", r.file_path},
              {"commit", r.commit},       {"difficulty", r.difficulty}};
}

TheoremRecord TheoremFromJson(const Json& j) {
  TheoremRecord r;
  r.name = j.at("name").get<std::string>();
  r.statement = j.at("statement").get<std::string>();
  r.proof = j.at("proof").get<std::string>();
  r.file_path = j.value("file_path", std::string());
  r.commit = j.value("commit", std::string());
  if (j.contains("difficulty")) {
    r.difficulty = j.at("difficulty").get<int>();
  } else {
    r.difficulty = CountTacticSteps(r.proof);
  }
  return r;
}

ExtractionResult ExtractTheorems(std::string_view source,
                                 const Provenance& provenance) {
  ExtractionResult result;
  const std::vector<LeanToken> tokens = LexLean(source);
  const std::string masked = MaskNonCode(source);
  const std::vector<Line> lines = internal::SplitLines(masked);
  std::vector<std::string> namespaces;

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& line = lines[li];
    if (line.words.empty()) continue;
    std::string_view first = line.words.front().text;
    if (line.indent == 0) {
      if (first == "namespace" && line.words.size() > 1) {
        namespaces.emplace_back(line.words[1].text);
        continue;
      }
      if (first == "section") {
        namespaces.emplace_back();
        continue;
      }
      if (first == "end") {
        if (!namespaces.empty()) namespaces.pop_back();
        continue;
      }
    }
    const std::size_t kw = DeclarationKeyword(line);
    if (kw == std::string_view::npos) continue;

    const std::size_t start = line.words[kw].offset;
    std::string_view raw_name =
        kw + 1 < line.words.size() ? DeclName(line.words[kw + 1].text) : "";

    std::size_t next = li + 1;
    while (next < lines.size() &&
           (lines[next].words.empty() || lines[next].indent > line.indent)) {
      ++next;
    }
    const std::size_t boundary =
        next < lines.size() ? lines[next].begin : source.size();
    const std::size_t end =
        DeclarationEnd(source, tokens, start, boundary, line.indent);
    li = next - 1;

    if (raw_name.empty()) {
      result.skipped.push_back(
          {"", start, "declaration keyword without a name"});
      continue;
    }
    const std::size_t assign = internal::FindTopLevelAssign(masked, start, end);
    if (assign == std::string_view::npos) {
      result.skipped.push_back(
          {Qualify(namespaces, raw_name), start,
           std::string(ErrorCodeName(ErrorCode::kMalformedDeclaration)) +
               ": no top-level ':=' before the end of the declaration"});
      continue;
    }
    std::size_t stmt_end = assign;
    if (std::size_t by = internal::FindLeadingBy(masked, assign, end);
        by != std::string_view::npos) {
      stmt_end = by;
    }
    TheoremRecord rec;
    rec.name = Qualify(namespaces, raw_name);
    rec.statement = std::string(source.substr(start, stmt_end - start));
    rec.proof = std::string(source.substr(start, end - start));
    rec.file_path = provenance.file_path;
    rec.commit = provenance.commit;
    rec.difficulty = CountTacticSteps(rec.proof);
    result.records.push_back(std::move(rec));
  }
  return result;
}

}  // namespace leanbridge::corpus
