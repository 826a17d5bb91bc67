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

#include "leanbridge/genclient/template.h"

#include <cctype>

#include "leanbridge/common/error.h"

namespace leanbridge::genclient {
namespace {

bool IsSlotChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

}  // namespace

PromptTemplate PromptTemplate::Parse(std::string name, const std::string& text) {
  PromptTemplate t;
  t.name_ = std::move(name);
  std::string literal;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text.compare(i, 2, "{{") == 0) {
      std::size_t j = i + 2;
      while (j < text.size() && IsSlotChar(text[j])) ++j;
      if (j > i + 2 && text.compare(j, 2, "}}") == 0) {
        if (!literal.empty()) t.segments_.push_back({false, std::move(literal)});
        literal.clear();
        std::string slot = text.substr(i + 2, j - i - 2);
        t.slots_.insert(slot);
        t.segments_.push_back({true, std::move(slot)});
        i = j + 2;
        continue;
      }
    }
    literal += text[i++];
  }
  if (!literal.empty()) t.segments_.push_back({false, std::move(literal)});
  return t;
}

PromptTemplate PromptTemplate::Parse(std::string name, const std::string& text,
                                     const std::set<std::string>& declared) {
  PromptTemplate t = Parse(std::move(name), text);
  for (const auto& slot : t.slots_) {
    if (!declared.contains(slot)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "template '" + t.name_ + "' references undeclared slot '" + slot + "'");
    }
  }
  return t;
}

std::string PromptTemplate::Render(
    const std::map<std::string, std::string>& bindings) const {
  std::string out;
  for (const auto& seg : segments_) {
    if (!seg.is_slot) {
      out += seg.text;
      continue;
    }
    auto it = bindings.find(seg.text);
    if (it == bindings.end()) {
      throw Error(ErrorCode::kMissingSlot,
                  "template '" + name_ + "' slot '" + seg.text + "' is not bound");
    }
    out += it->second;
  }
  return out;
}

PromptTemplate ProofWritingTemplate(bool nl_guidance) {
  std::string text =
      "You are a Lean4 expert who can write good Lean4 code based on "
      "natural language mathematical theorem and proof\n"
      "{{examples}}";
  if (nl_guidance) text += std::string(kNlSection) + "\n{{nl}}\n";
  text += std::string(kStatementSection) + "\n{{statement}}\n" + kProofSection + "\n";
  if (nl_guidance) return PromptTemplate::Parse("proof-writing", text, {"examples", "nl", "statement"});
  return PromptTemplate::Parse("proof-writing-fl", text, {"examples", "statement"});
}

std::string FormatProofExample(const std::string& nl, const std::string& statement,
                               const std::string& proof, bool nl_guidance) {
  std::string out;
  if (nl_guidance) out += std::string(kNlSection) + "\n" + nl + "\n";
  return out + kStatementSection + "\n" + statement + "\n" + kProofSection + "\n" + proof +
         "\n\n";
}

PromptTemplate InformalizationTemplate() {
  return PromptTemplate::Parse(
      "informalization",
      std::string("You are a mathematician who can write natural language proof "
                  "based on Lean4 proof. Answer with a **Statement:** paragraph "
                  "followed by a **Proof:** paragraph.\n"
                  "{{examples}}") +
          kStatementSection + "\n{{statement}}\n" + kProofSection + "\n{{proof}}\n" +
          kInformalSection + "\n",
      {"examples", "statement", "proof"});
}

PromptTemplate BootstrapTemplate() {
  return PromptTemplate::Parse(
      "bootstrap",
      std::string("You are a Lean4 expert. Insert the natural language proof below "
                  "into the Lean4 code as comments placed next to the steps they "
                  "explain. Only add `--` line comments; every line of code must "
                  "stay exactly as given.\n") +
          kNlSection + "\n{{nl}}\n" + kProofSection + "\n{{proof}}\n" +
          kCommentedSection + "\n",
      {"nl", "proof"});
}

}  // namespace leanbridge::genclient
