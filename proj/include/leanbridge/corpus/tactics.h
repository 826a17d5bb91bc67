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

#ifndef LEANBRIDGE_CORPUS_TACTICS_H_
#define LEANBRIDGE_CORPUS_TACTICS_H_

#include <string_view>

namespace leanbridge::corpus {

// Static proof-difficulty estimate: the number of top-level tactics in the
// proof's `by` block. A tactic starts on every line at the block's base
// indentation and after every top-level `;`. Lines that are more deeply
// indented, or that start inside an open bracket, continue the previous
// tactic. A term-mode proof counts as one step. Text without `:=` is read as
// a bare tactic sequence. Comments never count.
int CountTacticSteps(std::string_view proof);

}  // namespace leanbridge::corpus

#endif  // LEANBRIDGE_CORPUS_TACTICS_H_
