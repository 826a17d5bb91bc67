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

#ifndef LEANBRIDGE_CORPUS_LEAN3_H_
#define LEANBRIDGE_CORPUS_LEAN3_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace leanbridge::corpus {

enum class Lean3Pattern {
  kBeginEndBlock,
  kLean3Import,
  kOpenLocale,
};

std::string_view Lean3PatternName(Lean3Pattern p);

struct Lean3Finding {
  Lean3Pattern pattern;
  std::size_t offset;
  std::string excerpt;

  friend bool operator==(const Lean3Finding&, const Lean3Finding&) = default;
};

// Flags Lean 3 constructs that Lean 4 rejects: `begin ... end` tactic blocks,
// lowercase module imports (`import data.nat.prime`) and `open_locale`.
// Never fails; comments and strings are ignored.
std::vector<Lean3Finding> DetectLean3Artifacts(std::string_view text);

}  // namespace leanbridge::corpus

#endif  // LEANBRIDGE_CORPUS_LEAN3_H_
