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

#ifndef LEANBRIDGE_GENCLIENT_TEMPLATE_H_
#define LEANBRIDGE_GENCLIENT_TEMPLATE_H_

#include <map>
#include <set>
#include <string>
#include <vector>

namespace leanbridge::genclient {

// Text with {{slot}} placeholders. Slot names are [A-Za-z0-9_]+; any other
// brace sequence is literal text.
class PromptTemplate {
 public:
  struct Segment {
    bool is_slot;
    std::string text;  // literal text or slot name
  };

  static PromptTemplate Parse(std::string name, const std::string& text);
  // As Parse, but every referenced slot must be in `declared`.
  static PromptTemplate Parse(std::string name, const std::string& text,
                              const std::set<std::string>& declared);

  // Bound values are inserted verbatim and never re-expanded. Extra bindings
  // are ignored. Throws MissingSlot naming the first unbound slot.
  std::string Render(const std::map<std::string, std::string>& bindings) const;

  const std::string& name() const { return name_; }
  const std::vector<Segment>& segments() const { return segments_; }
  const std::set<std::string>& slots() const { return slots_; }

 private:
  std::string name_;
  std::vector<Segment> segments_;
  std::set<std::string> slots_;
};

// Section markers shared by prompts and packed training records.
inline constexpr char kNlSection[] = "### Natural language version of theorem and proof:";
inline constexpr char kStatementSection[] = "### Lean4 version of theorem statement:";
inline constexpr char kProofSection[] = "### Lean4 version of theorem and proof:";
inline constexpr char kInformalSection[] =
    "### Natural language version of theorem statement and proof:";
inline constexpr char kCommentedSection[] =
    "### Lean4 version of theorem and proof with comments:";

// Whole-proof writing. Slots: examples, nl, statement. Without NL guidance
// the NL section and the nl slot are dropped.
PromptTemplate ProofWritingTemplate(bool nl_guidance = true);
// One solved example in the proof-writing format, ending in a blank line.
std::string FormatProofExample(const std::string& nl, const std::string& statement,
                               const std::string& proof, bool nl_guidance = true);
// NL statement+proof from Lean4. Slots: examples, statement, proof.
PromptTemplate InformalizationTemplate();
// Interleave an NL proof into Lean4 code as comments. Slots: nl, proof.
PromptTemplate BootstrapTemplate();

}  // namespace leanbridge::genclient

#endif  // LEANBRIDGE_GENCLIENT_TEMPLATE_H_
