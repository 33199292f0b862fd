#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msql/ast.hpp"
#include "msql/lexer.hpp"

namespace msql {

/// Parses exactly one statement (an optional trailing ';' is consumed).
/// Throws Error(ParseError) carrying the offending position.
Statement parse_statement(const std::string& text);

/// Parses a ';'-separated script, all-or-nothing: the first error aborts
/// with its position. The empty script yields an empty list.
std::vector<Statement> parse_script(const std::string& text);

/// Incremental statement reader over a pre-tokenized script. Used by the
/// script runner so it can report per-statement positions and, in
/// keep-going mode, resynchronize past a failed statement.
class ScriptReader {
 public:
  explicit ScriptReader(const std::string& text);

  bool at_end() const;
  /// Position of the next statement's first token.
  SourcePos next_pos() const;
  /// Parses the next statement; throws Error(ParseError) on malformed input.
  Statement next();
  /// Skips tokens up to and including the next ';' after a failure.
  void resync();

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace msql
