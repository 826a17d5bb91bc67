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

#include "leanbridge/trainprep/tokenizer.h"

#include <algorithm>
#include <climits>

#include "leanbridge/common/error.h"
#include "leanbridge/common/jsonl.h"
#include "leanbridge/common/text.h"

namespace leanbridge::trainprep {
namespace {

bool IsSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool IsWordByte(unsigned char c) {
  return c >= 0x80 || std::isalnum(c) || c == '_';
}

template <typename Emit>
void WalkWordPunct(std::string_view text, Emit&& emit) {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpace(c)) {
      ++i;
    } else if (IsWordByte(c)) {
      std::size_t j = i;
      while (j < text.size() && IsWordByte(static_cast<unsigned char>(text[j]))) ++j;
      emit(text.substr(i, j - i));
      i = j;
    } else {
      emit(text.substr(i, 1));
      ++i;
    }
  }
}

std::size_t CodePointLength(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation byte stands alone
}

}  // namespace

std::int64_t Tokenizer::Count(std::string_view text) const {
  return static_cast<std::int64_t>(Tokenize(text).size());
}

std::vector<std::string> WhitespaceTokenizer::Tokenize(std::string_view text) const {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && IsSpace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !IsSpace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t WhitespaceTokenizer::Count(std::string_view text) const {
  std::int64_t n = 0;
  bool in_token = false;
  for (char ch : text) {
    const bool space = IsSpace(static_cast<unsigned char>(ch));
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

std::vector<std::string> WordPunctTokenizer::Tokenize(std::string_view text) const {
  std::vector<std::string> out;
  WalkWordPunct(text, [&](std::string_view t) { out.emplace_back(t); });
  return out;
}

std::int64_t WordPunctTokenizer::Count(std::string_view text) const {
  std::int64_t n = 0;
  WalkWordPunct(text, [&](std::string_view) { ++n; });
  return n;
}

BpeTokenizer::BpeTokenizer(std::vector<std::pair<std::string, std::string>> merges) {
  for (std::size_t r = 0; r < merges.size(); ++r) {
    ranks_.emplace(merges[r], static_cast<int>(r));  // first occurrence keeps priority
  }
}

BpeTokenizer BpeTokenizer::FromFile(const std::filesystem::path& path) {
  std::vector<std::pair<std::string, std::string>> merges;
  const std::string text = ReadFile(path);
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string_view line = Trim(std::string_view(text).substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos || line.find(' ', sp + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kConfigInvalid, path.string() + ":" + std::to_string(line_no) +
                                                 ": expected \"left right\"");
    }
    merges.emplace_back(std::string(line.substr(0, sp)), std::string(line.substr(sp + 1)));
  }
  return BpeTokenizer(std::move(merges));
}

std::vector<std::string> BpeTokenizer::EncodeWord(std::string_view word) const {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < word.size();) {
    const std::size_t n = std::min(CodePointLength(static_cast<unsigned char>(word[i])),
                                   word.size() - i);
    symbols.emplace_back(word.substr(i, n));
    i += n;
  }
  while (symbols.size() > 1) {
    int best_rank = INT_MAX;
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = ranks_.find({symbols[i], symbols[i + 1]});
      if (it != ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = i;
      }
    }
    if (best_rank == INT_MAX) break;
    symbols[best] += symbols[best + 1];
    symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  return symbols;
}

std::vector<std::string> BpeTokenizer::Tokenize(std::string_view text) const {
  std::vector<std::string> out;
  WalkWordPunct(text, [&](std::string_view piece) {
    for (auto& s : EncodeWord(piece)) out.push_back(std::move(s));
  });
  return out;
}

std::shared_ptr<const Tokenizer> MakeTokenizer(const std::string& spec) {
  if (spec.empty() || spec == "word-punct") return std::make_shared<WordPunctTokenizer>();
  if (spec == "whitespace") return std::make_shared<WhitespaceTokenizer>();
  if (spec.starts_with("bpe:")) {
    return std::make_shared<BpeTokenizer>(BpeTokenizer::FromFile(spec.substr(4)));
  }
  throw Error(ErrorCode::kConfigInvalid, "unknown tokenizer '" + spec +
                                             "' (expected whitespace, word-punct, or bpe:<file>)");
}

}  // namespace leanbridge::trainprep
