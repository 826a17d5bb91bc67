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

#ifndef LEANBRIDGE_CORPUS_LEXER_H_
#define LEANBRIDGE_CORPUS_LEXER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace leanbridge::corpus {

enum class TokenKind {
  kCode,
  kLineComment,
  kBlockComment,
  kStringLiteral,
  kWhitespace,
};

std::string_view TokenKindName(TokenKind kind);

// A slice of Lean source. Whitespace tokens are line breaks together with the
// indentation around them; spaces inside a line stay attached to the
// neighbouring code token.
struct LeanToken {
  TokenKind kind;
  std::string text;
  std::size_t begin;  // byte offset, inclusive
  std::size_t end;    // byte offset, exclusive

  bool IsComment() const {
    return kind == TokenKind::kLineComment || kind == TokenKind::kBlockComment;
  }
  friend bool operator==(const LeanToken&, const LeanToken&) = default;
};

// Splits Lean 4 source into tokens whose concatenation is the input. Block
// comments nest. Throws Error{kUnterminatedComment|kUnterminatedString} with
// the offset of the opening delimiter.
std::vector<LeanToken> LexLean(std::string_view source);

// Same as LexLean, but an unterminated comment or string swallows the rest of
// the input instead of failing. For scanning model output that is not
// guaranteed to be well-formed.
std::vector<LeanToken> LexLeanLenient(std::string_view source);

// Drops every comment token. A comment wedged between two non-blank
// characters becomes one space, because Lean treats a comment as a separator
// and gluing "a/-x-/b" into "ab" would change the program.
std::string StripComments(std::string_view source);

// Source with comment bodies blanked to spaces and string literal bodies
// blanked to 'x', keeping every newline and byte offset intact. Lenient.
std::string MaskNonCode(std::string_view source);

struct Lexeme {
  std::string_view text;
  std::size_t offset;
};

// Whitespace-separated pieces of code plus whole string literals, ignoring
// comments. This is the unit of comparison for TokenEqual.
std::vector<Lexeme> SignificantLexemes(std::string_view source);

bool TokenEqual(std::string_view a, std::string_view b);

struct Divergence {
  std::size_t index;         // position in the lexeme sequence
  std::string expected;      // lexeme from `a`, empty when `a` ran out
  std::size_t expected_offset;
  std::string actual;        // lexeme from `b`, empty when `b` ran out
  std::size_t actual_offset;
};

// First lexeme where `a` and `b` disagree, nullopt when token-equal.
std::optional<Divergence> FirstDivergence(std::string_view a,
                                          std::string_view b);

std::string DescribeDivergence(const Divergence& d);

}  // namespace leanbridge::corpus

#endif  // LEANBRIDGE_CORPUS_LEXER_H_
