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

#ifndef LEANBRIDGE_SRC_CORPUS_SOURCE_LINES_H_
#define LEANBRIDGE_SRC_CORPUS_SOURCE_LINES_H_

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace leanbridge::corpus::internal {

struct Word {
  std::string_view text;
  std::size_t offset;
};

struct Line {
  std::size_t begin;
  std::size_t end;  // offset of the '\n' or end of text
  std::size_t indent;
  std::vector<Word> words;
};

inline bool IsBlank(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
         c == '\v';
}

inline bool IsIdentChar(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '\'' || c == '!' ||
         c == '?' || c == '.';
}

// Splits (masked) text into lines of whitespace-separated words.
inline std::vector<Line> SplitLines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    Line line{pos, end, 0, {}};
    std::size_t i = pos;
    while (i < end && (text[i] == ' ' || text[i] == '\t')) ++i;
    line.indent = i - pos;
    while (i < end) {
      while (i < end && IsBlank(text[i])) ++i;
      std::size_t b = i;
      while (i < end && !IsBlank(text[i])) ++i;
      if (i > b) line.words.push_back({text.substr(b, i - b), b});
    }
    lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

// Bracket depth change for the byte sequence starting at text[i]; sets
// `width` to the number of bytes consumed.
inline int BracketDelta(std::string_view text, std::size_t i,
                        std::size_t& width) {
  width = 1;
  const char c = text[i];
  if (c == '(' || c == '[' || c == '{') return 1;
  if (c == ')' || c == ']' || c == '}') return -1;
  // U+27E8 and U+27E9, the anonymous-constructor brackets.
  if (static_cast<unsigned char>(c) == 0xE2 && i + 2 < text.size() &&
      static_cast<unsigned char>(text[i + 1]) == 0x9F) {
    const auto third = static_cast<unsigned char>(text[i + 2]);
    if (third == 0xA8) {
      width = 3;
      return 1;
    }
    if (third == 0xA9) {
      width = 3;
      return -1;
    }
  }
  return 0;
}

// Offset just past the first `:=` at bracket depth zero in
// masked[begin, end), or npos.
inline std::size_t FindTopLevelAssign(std::string_view masked,
                                      std::size_t begin, std::size_t end) {
  int depth = 0;
  for (std::size_t i = begin; i < end;) {
    std::size_t width;
    int delta = BracketDelta(masked, i, width);
    if (delta != 0) {
      depth = std::max(0, depth + delta);
      i += width;
      continue;
    }
    if (depth == 0 && masked[i] == ':' && i + 1 < end && masked[i + 1] == '=') {
      return i + 2;
    }
    ++i;
  }
  return std::string_view::npos;
}

// If the first code after `pos` is the keyword `by`, returns the offset just
// past it; otherwise npos.
inline std::size_t FindLeadingBy(std::string_view masked, std::size_t pos,
                                 std::size_t end) {
  while (pos < end && IsBlank(masked[pos])) ++pos;
  if (pos + 2 <= end && masked.substr(pos, 2) == "by" &&
      (pos + 2 == end || !IsIdentChar(masked[pos + 2]))) {
    return pos + 2;
  }
  return std::string_view::npos;
}

}  // namespace leanbridge::corpus::internal

#endif  // LEANBRIDGE_SRC_CORPUS_SOURCE_LINES_H_
