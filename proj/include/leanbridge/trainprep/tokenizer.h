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

#ifndef LEANBRIDGE_TRAINPREP_TOKENIZER_H_
#define LEANBRIDGE_TRAINPREP_TOKENIZER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace leanbridge::trainprep {

// Deterministic token counter used for every budget in the pipeline.
//
// All tokenizers here treat whitespace as a hard boundary, so when a ends or
// b starts with whitespace, Count(a + b) == Count(a) + Count(b). In general
// Count(a + b) <= Count(a) + Count(b) + join_constant().
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::string> Tokenize(std::string_view text) const = 0;
  virtual std::int64_t Count(std::string_view text) const;
  // J in the subadditivity bound above, or -1 when no constant bound exists.
  virtual std::int64_t join_constant() const = 0;
};

// Maximal runs of non-whitespace bytes. J = 0.
class WhitespaceTokenizer : public Tokenizer {
 public:
  std::string name() const override { return "whitespace"; }
  std::vector<std::string> Tokenize(std::string_view text) const override;
  std::int64_t Count(std::string_view text) const override;
  std::int64_t join_constant() const override { return 0; }
};

// Word runs ([A-Za-z0-9_] and all non-ASCII bytes) plus one token per ASCII
// punctuation character. J = 0: joining can only fuse two word runs.
class WordPunctTokenizer : public Tokenizer {
 public:
  std::string name() const override { return "word-punct"; }
  std::vector<std::string> Tokenize(std::string_view text) const override;
  std::int64_t Count(std::string_view text) const override;
  std::int64_t join_constant() const override { return 0; }
};

// Byte-pair merges applied inside each word-punct pre-token, starting from
// UTF-8 code points. Merge file: one "left right" pair per line in priority
// order; blank lines and lines starting with '#' are ignored. Fusing two
// word runs at a join may re-segment the fused word, so the excess is bounded
// only by its length in code points and join_constant() is -1. Joins at
// whitespace stay exactly additive.
class BpeTokenizer : public Tokenizer {
 public:
  explicit BpeTokenizer(std::vector<std::pair<std::string, std::string>> merges);
  static BpeTokenizer FromFile(const std::filesystem::path& path);

  std::string name() const override { return "bpe"; }
  std::vector<std::string> Tokenize(std::string_view text) const override;
  std::int64_t join_constant() const override { return -1; }

 private:
  std::vector<std::string> EncodeWord(std::string_view word) const;

  std::map<std::pair<std::string, std::string>, int> ranks_;
};

// "whitespace", "word-punct" (default), or "bpe:<merges file>".
std::shared_ptr<const Tokenizer> MakeTokenizer(const std::string& spec);

}  // namespace leanbridge::trainprep

#endif  // LEANBRIDGE_TRAINPREP_TOKENIZER_H_
