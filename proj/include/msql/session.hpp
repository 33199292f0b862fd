#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "msql/engine.hpp"

namespace msql {

enum class OutputMode { Table, JsonText };

/// Renders a ResultSet. TABLE mode aligns flat items into columns and prints
/// "(0 items)" for empty output objects; JSON-TEXT prints each output object
/// as one array of canonical values. Multiple '&' output objects become
/// separately labeled blocks in both modes.
std::string format_result(const ResultSet& rs, OutputMode mode);

std::string format_exec_result(const Database::ExecResult& result, OutputMode mode);

/// One engine instance plus REPL state. A session is the single writer of
/// its database.
class Session {
 public:
  Database& db() { return db_; }
  const Database& db() const { return db_; }

  OutputMode mode() const { return mode_; }
  void set_mode(OutputMode mode) { mode_ = mode; }

  bool empty() const { return db_.catalog().empty(); }

  /// Texts of the statements this session has executed, oldest first.
  const std::vector<std::string>& history() const { return history_; }
  void record(std::string statement_text) { history_.push_back(std::move(statement_text)); }

  /// Parses and executes one statement, returning its printable outcome.
  std::string execute_text(const std::string& text);

  /// The snapshot is itself a Multi-SQL script: a header line, the canonical
  /// DDL recreating the catalog, then INSERT MULTIVAL statements recreating
  /// all data. Loading it into an empty session reproduces both exactly.
  std::string snapshot_text() const;
  void save_snapshot(const std::string& path) const;
  /// Replays a snapshot; the session must be empty unless `replace`.
  void load_snapshot(const std::string& path, bool replace = false);

 private:
  Database db_;
  OutputMode mode_ = OutputMode::Table;
  std::vector<std::string> history_;
};

/// Executes a script file statement by statement. On the first error prints
/// file:line:col and stops with exit code 1 unless `keep_going`; unreadable
/// files exit 2.
int run_script(Session& session, const std::string& path, bool keep_going, std::ostream& out,
               std::ostream& err);

/// Interactive loop: ';'-terminated statements (multi-line), meta-commands
/// (.help, .objects, .scheme NAME, .save PATH, .load PATH, .mode MODE,
/// .quit). Statement errors print a caret and the loop continues.
int repl(Session& session, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace msql
