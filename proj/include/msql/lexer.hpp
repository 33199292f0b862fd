#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msql/error.hpp"

namespace msql {

enum class TokenKind { Keyword, Ident, IntLit, StrLit, Punct, ArrowRight, ArrowLeft, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;      // raw source spelling (keywords keep their case)
  std::string keyword;   // canonical uppercase form, keywords only
  std::int64_t int_value = 0;
  std::string str_value;  // unescaped, string literals only
  int line = 1;
  int column = 1;

  bool is_keyword(const std::string& canonical) const {
    return kind == TokenKind::Keyword && keyword == canonical;
  }
  bool is_punct(const std::string& p) const { return kind == TokenKind::Punct && text == p; }
  SourcePos pos() const { return {line, column}; }
};

/// True when `word` is reserved (case-insensitive comparison).
bool is_reserved_keyword(const std::string& word);

/// Tokenizes a statement or script. Line comments start with "--", block
/// comments use /* */. The unicode arrows and comparison signs lex to their
/// ASCII forms. Throws Error(LexError) with a position on bad input; the
/// result always ends with an End token.
std::vector<Token> tokenize(const std::string& text);

}  // namespace msql
