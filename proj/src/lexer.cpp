#include "msql/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

#include "msql/value.hpp"

namespace msql {

namespace {

const std::array<const char*, 55> kKeywords = {
    "AND",      "ANY",    "AS",     "ASC",      "BOOL",     "BY",      "CREATE",
    "DELETE",   "DESC",   "DISTINCT", "DOCUMENT", "EDGE",   "FALSE",   "FOREIGN",
    "FROM",     "GRAPH",  "IN",     "INIT",     "INSERT",   "INT",     "INTO",
    "JOIN",     "KV",     "LEFT",   "LIST",     "MAP",      "MATCH",   "MULTI",
    "MULTIVAL", "NODE",   "NOT",    "NOT_NULL", "NULL",     "OF",      "OM",
    "OR",       "ORDER",  "PATH",   "PRIMARY",  "QUERY",    "RELATION", "RIGHT",
    "RULE",     "SELECT", "SET",    "SINGLE",   "STRING",   "TO",      "TRANSFER",
    "TRUE",     "UPDATE", "VIEW",   "WHERE",    "WITH",     "XOR",
};

std::string to_upper(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

bool ident_head(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool ident_tail(char c) { return ident_head(c) || (c >= '0' && c <= '9'); }

}  // namespace

bool is_reserved_keyword(const std::string& word) {
  std::string up = to_upper(word);
  for (const char* k : kKeywords) {
    if (up == k) return true;
  }
  return false;
}

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Token t = next_token();
      bool end = t.kind == TokenKind::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw Error(ErrorCode::LexError, {line_, column_}, message);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  bool match_bytes(const char* bytes, std::size_t n) {
    if (pos_ + n > text_.size()) return false;
    if (text_.compare(pos_, n, bytes, n) != 0) return false;
    for (std::size_t i = 0; i < n; ++i) advance();
    return true;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      if (c == '-' && peek(1) == '-') {
        while (!eof() && peek() != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        int start_line = line_, start_col = column_;
        advance();
        advance();
        while (true) {
          if (eof()) {
            throw Error(ErrorCode::LexError, {start_line, start_col}, "unterminated block comment");
          }
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
        continue;
      }
      break;
    }
  }

  Token make(TokenKind kind, std::string text, int line, int column) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = line;
    t.column = column;
    return t;
  }

  Token lex_number(bool negative, int line, int column) {
    std::string raw;
    if (negative) raw.push_back('-');
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
      raw.push_back(advance());
    }
    // 64-bit signed; overflow is a lex error rather than silent wrap.
    std::uint64_t acc = 0;
    const std::uint64_t limit = negative
        ? static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) + 1
        : static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
    for (std::size_t i = negative ? 1 : 0; i < raw.size(); ++i) {
      acc = acc * 10 + static_cast<std::uint64_t>(raw[i] - '0');
      if (acc > limit) {
        throw Error(ErrorCode::LexError, {line, column}, "integer literal out of 64-bit range");
      }
    }
    Token t = make(TokenKind::IntLit, raw, line, column);
    t.int_value = negative ? -static_cast<std::int64_t>(acc) : static_cast<std::int64_t>(acc);
    return t;
  }

  Token lex_string(int line, int column) {
    std::string raw = "\"";
    std::string value;
    while (true) {
      if (eof()) {
        throw Error(ErrorCode::LexError, {line, column}, "unterminated string literal");
      }
      char c = advance();
      raw.push_back(c);
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) {
          throw Error(ErrorCode::LexError, {line, column}, "unterminated string literal");
        }
        char e = advance();
        raw.push_back(e);
        switch (e) {
          case '"': value.push_back('"'); break;
          case '\\': value.push_back('\\'); break;
          case 'n': value.push_back('\n'); break;
          case 't': value.push_back('\t'); break;
          case 'r': value.push_back('\r'); break;
          default:
            fail(std::string("unknown escape \\") + e);
        }
        continue;
      }
      value.push_back(c);
    }
    Token t = make(TokenKind::StrLit, raw, line, column);
    t.str_value = std::move(value);
    return t;
  }

  Token next_token() {
    int line = line_, column = column_;
    if (eof()) return make(TokenKind::End, "", line, column);

    // Unicode renderings accepted alongside their ASCII forms.
    if (match_bytes("\xE2\x86\x92", 3)) return make(TokenKind::ArrowRight, "->", line, column);
    if (match_bytes("\xE2\x86\x90", 3)) return make(TokenKind::ArrowLeft, "<-", line, column);
    if (match_bytes("\xE2\x89\xA4", 3)) return make(TokenKind::Punct, "<=", line, column);
    if (match_bytes("\xE2\x89\xA5", 3)) return make(TokenKind::Punct, ">=", line, column);
    // Curly quotes appear in copied text; treat them as plain quotes.
    if (match_bytes("\xE2\x80\x9C", 3) || match_bytes("\xE2\x80\x9D", 3)) {
      return lex_curly_string(line, column);
    }

    char c = peek();
    if (ident_head(c)) {
      std::string word;
      while (!eof() && ident_tail(peek())) word.push_back(advance());
      if (is_reserved_keyword(word)) {
        Token t = make(TokenKind::Keyword, word, line, column);
        t.keyword = to_upper(word);
        return t;
      }
      return make(TokenKind::Ident, word, line, column);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return lex_number(false, line, column);
    }
    if (c == '-') {
      if (std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        return lex_number(true, line, column);
      }
      if (peek(1) == '>') {
        advance();
        advance();
        return make(TokenKind::ArrowRight, "->", line, column);
      }
      fail("unexpected '-'");
    }
    if (c == '"') {
      advance();
      return lex_string(line, column);
    }
    if (c == '<') {
      advance();
      if (peek() == '=') {
        advance();
        return make(TokenKind::Punct, "<=", line, column);
      }
      if (peek() == '-') {
        advance();
        return make(TokenKind::ArrowLeft, "<-", line, column);
      }
      return make(TokenKind::Punct, "<", line, column);
    }
    if (c == '>') {
      advance();
      if (peek() == '=') {
        advance();
        return make(TokenKind::Punct, ">=", line, column);
      }
      return make(TokenKind::Punct, ">", line, column);
    }
    if (c == ':') {
      advance();
      if (peek() == '=') {
        advance();
        return make(TokenKind::Punct, ":=", line, column);
      }
      return make(TokenKind::Punct, ":", line, column);
    }
    switch (c) {
      case '(': case ')': case '{': case '}': case '[': case ']':
      case ',': case ';': case '.': case '&': case '=':
        advance();
        return make(TokenKind::Punct, std::string(1, c), line, column);
      default:
        break;
    }
    fail(std::string("illegal character '") + c + "'");
  }

  // A string opened (or closed) with typographic quotes.
  Token lex_curly_string(int line, int column) {
    std::string value;
    while (true) {
      if (eof()) {
        throw Error(ErrorCode::LexError, {line, column}, "unterminated string literal");
      }
      if (match_bytes("\xE2\x80\x9C", 3) || match_bytes("\xE2\x80\x9D", 3)) break;
      char c = advance();
      if (c == '"') break;
      value.push_back(c);
    }
    Token t = make(TokenKind::StrLit, escape_string(value), line, column);
    t.str_value = std::move(value);
    return t;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(const std::string& text) { return Lexer(text).run(); }

}  // namespace msql
