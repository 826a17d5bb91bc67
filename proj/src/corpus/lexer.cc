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

#include "leanbridge/corpus/lexer.h"

#include "leanbridge/common/error.h"

namespace leanbridge::corpus {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsIdentByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '\'' || c == '!' ||
         c == '?' || c == '.';
}

bool StartsAt(std::string_view s, std::size_t pos, std::string_view what) {
  return s.substr(pos, what.size()) == what;
}

struct Piece {
  TokenKind kind;
  std::size_t begin;
  std::size_t end;
};

// Length of a character literal starting at `pos`, or 0 if the quote there
// is not one (identifiers such as f' also contain quotes).
std::size_t CharLiteralLength(std::string_view s, std::size_t pos) {
  if (pos > 0 && IsIdentByte(s[pos - 1])) return 0;
  std::size_t i = pos + 1;
  if (i >= s.size() || s[i] == '\n') return 0;
  if (s[i] == '\\') {
    for (std::size_t j = i + 2; j < s.size() && j < pos + 12; ++j) {
      if (s[j] == '\'') return j - pos + 1;
      if (s[j] == '\n') return 0;
    }
    return 0;
  }
  // One UTF-8 code point.
  const auto lead = static_cast<unsigned char>(s[i]);
  std::size_t width = lead < 0x80 ? 1 : lead < 0xE0 ? 2 : lead < 0xF0 ? 3 : 4;
  std::size_t close = i + width;
  if (close < s.size() && s[close] == '\'') return close - pos + 1;
  return 0;
}

std::vector<Piece> Scan(std::string_view s, bool strict) {
  std::vector<Piece> pieces;
  std::size_t pos = 0;
  const std::size_t n = s.size();
  while (pos < n) {
    const std::size_t start = pos;
    if (StartsAt(s, pos, "--")) {
      std::size_t end = s.find('\n', pos);
      if (end == std::string_view::npos) end = n;
      pieces.push_back({TokenKind::kLineComment, start, end});
      pos = end;
      continue;
    }
    if (StartsAt(s, pos, "/-")) {
      int depth = 1;
      std::size_t i = pos + 2;
      while (i < n && depth > 0) {
        if (StartsAt(s, i, "/-")) {
          ++depth;
          i += 2;
        } else if (StartsAt(s, i, "-/")) {
          --depth;
          i += 2;
        } else {
          ++i;
        }
      }
      if (depth > 0) {
        if (strict) {
          throw Error(ErrorCode::kUnterminatedComment,
                      "block comment is never closed", start);
        }
        i = n;
      }
      pieces.push_back({TokenKind::kBlockComment, start, i});
      pos = i;
      continue;
    }
    if (s[pos] == '"') {
      std::size_t i = pos + 1;
      bool closed = false;
      while (i < n) {
        if (s[i] == '\\') {
          i += 2;
        } else if (s[i] == '"') {
          ++i;
          closed = true;
          break;
        } else {
          ++i;
        }
      }
      if (!closed) {
        if (strict) {
          throw Error(ErrorCode::kUnterminatedString,
                      "string literal is never closed", start);
        }
        i = n;
      }
      pieces.push_back({TokenKind::kStringLiteral, start, std::min(i, n)});
      pos = std::min(i, n);
      continue;
    }
    if (IsSpace(s[pos])) {
      while (pos < n && IsSpace(s[pos])) ++pos;
      pieces.push_back({TokenKind::kWhitespace, start, pos});
      continue;
    }
    while (pos < n && !IsSpace(s[pos]) && s[pos] != '"' &&
           !StartsAt(s, pos, "--") && !StartsAt(s, pos, "/-")) {
      if (s[pos] == '\'') {
        if (std::size_t len = CharLiteralLength(s, pos)) {
          pos += len;
          continue;
        }
      }
      ++pos;
    }
    pieces.push_back({TokenKind::kCode, start, pos});
  }
  return pieces;
}

std::vector<LeanToken> Merge(std::string_view s,
                             const std::vector<Piece>& pieces) {
  std::vector<LeanToken> out;
  std::size_t pending_begin = std::string_view::npos;
  auto emit = [&](TokenKind kind, std::size_t b, std::size_t e) {
    out.push_back({kind, std::string(s.substr(b, e - b)), b, e});
  };
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const Piece& p = pieces[i];
    const bool inline_space =
        p.kind == TokenKind::kWhitespace &&
        s.substr(p.begin, p.end - p.begin).find('\n') == std::string_view::npos;
    if (inline_space) {
      if (!out.empty() && out.back().kind == TokenKind::kCode &&
          out.back().end == p.begin) {
        out.back().text.append(s.substr(p.begin, p.end - p.begin));
        out.back().end = p.end;
      } else if (i + 1 < pieces.size() &&
                 pieces[i + 1].kind == TokenKind::kCode) {
        pending_begin = p.begin;
      } else {
        emit(TokenKind::kWhitespace, p.begin, p.end);
      }
      continue;
    }
    if (p.kind == TokenKind::kCode) {
      const std::size_t b =
          pending_begin != std::string_view::npos ? pending_begin : p.begin;
      pending_begin = std::string_view::npos;
      if (!out.empty() && out.back().kind == TokenKind::kCode &&
          out.back().end == b) {
        out.back().text.append(s.substr(b, p.end - b));
        out.back().end = p.end;
      } else {
        emit(TokenKind::kCode, b, p.end);
      }
      continue;
    }
    emit(p.kind, p.begin, p.end);
  }
  return out;
}

}  // namespace

std::string_view TokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::kCode: return "code";
    case TokenKind::kLineComment: return "line-comment";
    case TokenKind::kBlockComment: return "block-comment";
    case TokenKind::kStringLiteral: return "string-literal";
    case TokenKind::kWhitespace: return "whitespace";
  }
  return "unknown";
}

std::vector<LeanToken> LexLean(std::string_view source) {
  return Merge(source, Scan(source, /*strict=*/true));
}

std::vector<LeanToken> LexLeanLenient(std::string_view source) {
  return Merge(source, Scan(source, /*strict=*/false));
}

std::string StripComments(std::string_view source) {
  std::string out;
  out.reserve(source.size());
  bool removed = false;
  for (const LeanToken& t : LexLean(source)) {
    if (t.IsComment()) {
      removed = true;
      continue;
    }
    if (removed && !out.empty() && !IsSpace(out.back()) &&
        !IsSpace(t.text.front())) {
      out += ' ';
    }
    removed = false;
    out += t.text;
  }
  return out;
}

std::string MaskNonCode(std::string_view source) {
  std::string out(source);
  for (const Piece& p : Scan(source, /*strict=*/false)) {
    if (p.kind == TokenKind::kLineComment ||
        p.kind == TokenKind::kBlockComment) {
      for (std::size_t i = p.begin; i < p.end; ++i) {
        if (out[i] != '\n') out[i] = ' ';
      }
    } else if (p.kind == TokenKind::kStringLiteral) {
      for (std::size_t i = p.begin + 1; i + 1 < p.end; ++i) {
        if (out[i] != '\n') out[i] = 'x';
      }
    }
  }
  return out;
}

std::vector<Lexeme> SignificantLexemes(std::string_view source) {
  std::vector<Lexeme> out;
  for (const Piece& p : Scan(source, /*strict=*/true)) {
    if (p.kind == TokenKind::kStringLiteral) {
      out.push_back({source.substr(p.begin, p.end - p.begin), p.begin});
    } else if (p.kind == TokenKind::kCode) {
      out.push_back({source.substr(p.begin, p.end - p.begin), p.begin});
    }
  }
  return out;
}

bool TokenEqual(std::string_view a, std::string_view b) {
  return !FirstDivergence(a, b).has_value();
}

std::optional<Divergence> FirstDivergence(std::string_view a,
                                          std::string_view b) {
  const auto la = SignificantLexemes(a);
  const auto lb = SignificantLexemes(b);
  const std::size_t common = std::min(la.size(), lb.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (la[i].text != lb[i].text) {
      return Divergence{i, std::string(la[i].text), la[i].offset,
                        std::string(lb[i].text), lb[i].offset};
    }
  }
  if (la.size() == lb.size()) return std::nullopt;
  Divergence d{common, "", Error::kNoOffset, "", Error::kNoOffset};
  if (common < la.size()) {
    d.expected = std::string(la[common].text);
    d.expected_offset = la[common].offset;
  } else {
    d.actual = std::string(lb[common].text);
    d.actual_offset = lb[common].offset;
  }
  return d;
}

std::string DescribeDivergence(const Divergence& d) {
  auto show = [](const std::string& s) {
    return s.empty() ? std::string("<end of input>") : "'" + s + "'";
  };
  std::string out = "token " + std::to_string(d.index) + ": expected " +
                    show(d.expected) + ", found " + show(d.actual);
  if (d.actual_offset != Error::kNoOffset) {
    out += " at byte " + std::to_string(d.actual_offset);
  }
  return out;
}

}  // namespace leanbridge::corpus
