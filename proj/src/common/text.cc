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

#include "leanbridge/common/text.h"

#include <algorithm>

namespace leanbridge {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string_view Trim(std::string_view s) {
  while (!s.empty() && IsSpace(s.front())) s.remove_prefix(1);
  return TrimRight(s);
}

std::string_view TrimRight(std::string_view s) {
  while (!s.empty() && IsSpace(s.back())) s.remove_suffix(1);
  return s;
}

std::string ReplaceAll(std::string s, std::string_view from,
                       std::string_view to) {
  if (from.empty()) return s;
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::string NormalizeLineEndings(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out += '\n';
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string CollapseWhitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : Trim(s)) {
    if (IsSpace(c)) {
      pending = true;
      continue;
    }
    if (pending) out += ' ';
    pending = false;
    out += c;
  }
  return out;
}

std::string Dedent(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find('\n', pos);
    if (end == std::string_view::npos) end = s.size();
    lines.push_back(s.substr(pos, end - pos));
    pos = end + 1;
  }
  std::size_t common = std::string_view::npos;
  for (auto line : lines) {
    std::size_t lead = line.find_first_not_of(" \t");
    if (lead == std::string_view::npos) continue;
    common = std::min(common, lead);
  }
  if (common == std::string_view::npos || common == 0) return std::string(s);
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    if (line.size() >= common) {
      out += line.substr(common);
    } else {
      out += Trim(line);
    }
    if (i + 1 < lines.size()) out += '\n';
  }
  return out;
}

std::vector<FencedBlock> FindFencedBlocks(std::string_view text) {
  std::vector<FencedBlock> blocks;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find("```", pos);
    if (open == std::string_view::npos) break;
    std::size_t info_end = text.find('\n', open);
    if (info_end == std::string_view::npos) break;
    FencedBlock block;
    block.offset = open;
    block.info = std::string(Trim(text.substr(open + 3, info_end - open - 3)));
    std::size_t body = info_end + 1;
    std::size_t close = text.find("```", body);
    if (close == std::string_view::npos) {
      block.content = std::string(text.substr(body));
      blocks.push_back(std::move(block));
      break;
    }
    block.content = std::string(text.substr(body, close - body));
    blocks.push_back(std::move(block));
    pos = close + 3;
  }
  return blocks;
}

}  // namespace leanbridge
