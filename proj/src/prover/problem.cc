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

#include "leanbridge/prover/problem.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "leanbridge/common/error.h"
#include "leanbridge/common/text.h"
#include "leanbridge/corpus/lexer.h"
#include "leanbridge/genclient/template.h"

namespace leanbridge::prover {
namespace {

bool IsIdentByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '.' || c == '\'' || c >= 0x80;
}

bool NameMatches(std::string_view found, std::string_view wanted) {
  auto suffix = [](std::string_view full, std::string_view tail) {
    return full.size() > tail.size() && full.substr(full.size() - tail.size()) == tail &&
           full[full.size() - tail.size() - 1] == '.';
  };
  return found == wanted || suffix(found, wanted) || suffix(wanted, found);
}

struct Declaration {
  std::size_t keyword;   // offset of `theorem`/`lemma`
  std::size_t name_end;  // offset just past the name
  std::string name;
};

// Declarations in `masked` (comments and strings blanked).
std::vector<Declaration> FindDeclarations(std::string_view masked) {
  std::vector<Declaration> out;
  for (const std::string_view kw : {std::string_view("theorem"), std::string_view("lemma")}) {
    for (std::size_t at = masked.find(kw); at != std::string_view::npos;
         at = masked.find(kw, at + 1)) {
      const std::size_t after = at + kw.size();
      if (at > 0 && IsIdentByte(static_cast<unsigned char>(masked[at - 1]))) continue;
      if (after >= masked.size() || !std::isspace(static_cast<unsigned char>(masked[after]))) {
        continue;
      }
      std::size_t b = after;
      while (b < masked.size() && std::isspace(static_cast<unsigned char>(masked[b]))) ++b;
      std::size_t e = b;
      while (e < masked.size() && IsIdentByte(static_cast<unsigned char>(masked[e]))) ++e;
      if (e > b) out.push_back({at, e, std::string(masked.substr(b, e - b))});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Declaration& a, const Declaration& b) { return a.keyword < b.keyword; });
  return out;
}

bool StartsTopLevel(std::string_view line) {
  static const char* kStops[] = {"theorem ", "lemma ", "def ", "example ", "example:",
                                 "end ", "namespace ", "section", "#", "```", "import "};
  if (line == "end") return true;
  for (const char* s : kStops) {
    if (line.substr(0, std::char_traits<char>::length(s)) == s) return true;
  }
  return false;
}

std::string Squash(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

}  // namespace

Json ToJson(const Problem& p) {
  return Json{{"name", p.name}, {"fl_statement", p.fl_statement},
              {"nl_statement_and_proof", p.nl_statement_and_proof}, {"imports", p.imports}};
}

Problem ProblemFromJson(const Json& j) {
  try {
    Problem p{j.at("name").get<std::string>(), j.at("fl_statement").get<std::string>(),
              j.value("nl_statement_and_proof", std::string()), j.value("imports", std::string())};
    if (p.name.empty() || Trim(p.fl_statement).empty()) {
      throw Error(ErrorCode::kInvalidArgument, "problem needs a name and an fl_statement");
    }
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed problem: ") + e.what());
  }
}

std::vector<Problem> LoadProblems(const std::filesystem::path& path) {
  std::vector<Problem> out;
  std::set<std::string> names;
  for (const auto& j : ReadJsonl(path)) {
    out.push_back(ProblemFromJson(j));
    if (!names.insert(out.back().name).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  path.string() + ": duplicate problem '" + out.back().name + "'");
    }
  }
  return out;
}

Json ToJson(const PoolExample& e) {
  return Json{{"name", e.name}, {"nl", e.nl}, {"statement", e.statement}, {"proof", e.proof},
              {"round", e.round}};
}

PoolExample PoolExampleFromJson(const Json& j) {
  try {
    return PoolExample{j.at("name").get<std::string>(), j.value("nl", std::string()),
                       j.at("statement").get<std::string>(), j.at("proof").get<std::string>(),
                       j.value("round", 0)};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed example: ") + e.what());
  }
}

std::vector<PoolExample> LoadExamplePool(const std::filesystem::path& path) {
  std::vector<PoolExample> out;
  for (const auto& j : ReadJsonl(path)) out.push_back(PoolExampleFromJson(j));
  return out;
}

void PromptConfig::Validate() const {
  if (k_min < 0 || k_max < k_min || context_budget <= 0) {
    throw Error(ErrorCode::kConfigInvalid,
                "prompt config needs 0 <= k_min <= k_max and a positive budget");
  }
}

AssembledPrompt AssembleProofPrompt(const Problem& problem, const std::vector<PoolExample>& pool,
                                    const PromptConfig& config,
                                    const trainprep::Tokenizer& tokenizer) {
  config.Validate();
  const auto tmpl = genclient::ProofWritingTemplate(config.nl_guidance);
  auto render = [&](const std::string& examples) {
    std::map<std::string, std::string> b = {{"examples", examples},
                                            {"statement", problem.fl_statement}};
    if (config.nl_guidance) b["nl"] = problem.nl_statement_and_proof;
    return tmpl.Render(b);
  };
  AssembledPrompt out;
  out.tokens = tokenizer.Count(render(""));
  if (out.tokens > config.context_budget) {
    throw Error(ErrorCode::kPromptExceedsBudget,
                "prompt for '" + problem.name + "' needs " + std::to_string(out.tokens) +
                    " tokens without examples, budget is " +
                    std::to_string(config.context_budget));
  }
  std::string examples;
  for (const auto& e : pool) {
    if (static_cast<int>(out.example_names.size()) >= config.k_max) break;
    const std::string block =
        genclient::FormatProofExample(e.nl, e.statement, e.proof, config.nl_guidance);
    const std::int64_t cost = tokenizer.Count(block);
    if (out.tokens + cost > config.context_budget) break;
    out.tokens += cost;
    examples += block;
    out.example_names.push_back(e.name);
  }
  out.text = render(examples);
  return out;
}

ExtractedProof ExtractProof(std::string_view generated_text, const Problem& problem) {
  std::vector<std::string> regions;
  for (const auto& block : FindFencedBlocks(generated_text)) regions.push_back(block.content);
  if (regions.empty()) regions.emplace_back(generated_text);

  for (const auto& region : regions) {
    const std::string masked = corpus::MaskNonCode(region);
    for (const auto& decl : FindDeclarations(masked)) {
      if (!NameMatches(decl.name, problem.name)) continue;
      // The region ends at the first later line that starts a new top-level
      // item at column 0.
      std::size_t end = region.size();
      for (std::size_t nl = masked.find('\n', decl.keyword); nl != std::string::npos;
           nl = masked.find('\n', nl + 1)) {
        const std::size_t line_end = std::min(masked.find('\n', nl + 1), masked.size());
        if (StartsTopLevel(std::string_view(masked).substr(nl + 1, line_end - nl - 1))) {
          end = nl + 1;
          break;
        }
      }
      ExtractedProof out;
      out.proof = std::string(TrimRight(std::string_view(region).substr(decl.keyword,
                                                                        end - decl.keyword)));
      // Scan the whole region: a Lean 3 `end` at column 0 falls outside the
      // extracted declaration, and so do Lean 3 imports.
      out.lean3 = corpus::DetectLean3Artifacts(region);
      return out;
    }
  }
  throw Error(ErrorCode::kNoProofFound,
              "no declaration of '" + problem.name + "' in the generated text");
}

bool KeepsStatement(const Problem& problem, std::string_view proof) {
  std::string stated;
  std::string written;
  try {
    stated = corpus::StripComments(problem.fl_statement);
    written = corpus::StripComments(proof);
  } catch (const Error&) {
    return false;
  }
  const auto a = FindDeclarations(corpus::MaskNonCode(stated));
  const auto b = FindDeclarations(corpus::MaskNonCode(written));
  if (a.empty() || b.empty() || !NameMatches(b.front().name, a.front().name)) return false;
  // The statement may end in `:=` or `:= by`; the proof may pick either form.
  std::string want = Squash(std::string_view(stated).substr(a.front().name_end));
  for (const std::string_view tail : {std::string_view("by"), std::string_view(":=")}) {
    if (want.size() >= tail.size() && want.compare(want.size() - tail.size(), tail.size(), tail) == 0) {
      want.resize(want.size() - tail.size());
    }
  }
  const std::string got = Squash(std::string_view(written).substr(b.front().name_end));
  return got.compare(0, want.size(), want) == 0;
}

}  // namespace leanbridge::prover
