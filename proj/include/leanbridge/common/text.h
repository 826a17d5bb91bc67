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

#ifndef LEANBRIDGE_COMMON_TEXT_H_
#define LEANBRIDGE_COMMON_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace leanbridge {

std::string_view Trim(std::string_view s);
std::string_view TrimRight(std::string_view s);
std::string ReplaceAll(std::string s, std::string_view from,
                       std::string_view to);
std::string NormalizeLineEndings(std::string_view s);

// Collapses every whitespace run to a single space and trims the ends.
std::string CollapseWhitespace(std::string_view s);

// Removes the longest common leading-whitespace prefix of all non-blank lines.
std::string Dedent(std::string_view s);

struct FencedBlock {
  std::string info;     // text after the opening fence, e.g. "lean4"
  std::string content;  // body without the fences
  std::size_t offset;   // byte offset of the opening fence
};

// Markdown ``` fenced blocks in document order. An unclosed fence runs to the
// end of the text.
std::vector<FencedBlock> FindFencedBlocks(std::string_view text);

}  // namespace leanbridge

#endif  // LEANBRIDGE_COMMON_TEXT_H_
