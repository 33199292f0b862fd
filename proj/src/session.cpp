#include "msql/session.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "msql/parser.hpp"
#include "msql/printer.hpp"

namespace msql {

namespace {

constexpr const char* kSnapshotHeader = "MULTISQL-SNAPSHOT v1";

std::vector<std::string> result_columns(const OutputObject& out) {
  std::vector<std::string> names;
  for (const auto& c : out.columns) names.push_back(c.name);
  if (!names.empty()) return names;
  std::set<std::string> keys;
  bool all_maps = !out.items.empty();
  for (const auto& item : out.items) {
    if (!item.is_map()) {
      all_maps = false;
      break;
    }
    for (const auto& [k, v] : item.entries()) keys.insert(k);
  }
  if (all_maps) names.assign(keys.begin(), keys.end());
  return names;
}

std::string format_table_block(const OutputObject& out) {
  if (out.items.empty()) return "(0 items)\n";
  std::vector<std::string> columns = result_columns(out);
  if (columns.empty()) {
    // Scalar or mixed items: one value per line.
    std::string text;
    for (const auto& item : out.items) {
      text += print_value(item);
      text += "\n";
    }
    return text;
  }
  std::vector<std::vector<std::string>> grid;
  grid.push_back(columns);
  for (const auto& item : out.items) {
    std::vector<std::string> row;
    for (const auto& col : columns) {
      const Value* v = item.find(col);
      row.push_back(v ? print_value(*v) : "NULL");
    }
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> widths(columns.size(), 0);
  for (const auto& row : grid) {
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  }
  std::string text;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t i = 0; i < grid[r].size(); ++i) {
      if (i) text += "  ";
      text += grid[r][i];
      if (i + 1 < grid[r].size()) {
        text.append(widths[i] - grid[r][i].size(), ' ');
      }
    }
    text += "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t i = 0; i < widths.size(); ++i) total += widths[i] + (i ? 2 : 0);
      text.append(total, '-');
      text += "\n";
    }
  }
  return text;
}

std::string format_json_block(const OutputObject& out) {
  std::string text = "[";
  for (std::size_t i = 0; i < out.items.size(); ++i) {
    if (i) text += ", ";
    text += print_value(out.items[i]);
  }
  text += "]\n";
  return text;
}

}  // namespace

std::string format_result(const ResultSet& rs, OutputMode mode) {
  if (rs.outputs.empty()) return "(0 items)\n";
  std::string text;
  bool labeled = rs.outputs.size() > 1;
  for (std::size_t i = 0; i < rs.outputs.size(); ++i) {
    const OutputObject& out = rs.outputs[i];
    if (labeled) {
      text += "-- " + (out.label.empty() ? std::to_string(i + 1) : out.label) + "\n";
    }
    text += mode == OutputMode::Table ? format_table_block(out) : format_json_block(out);
  }
  return text;
}

std::string format_exec_result(const Database::ExecResult& result, OutputMode mode) {
  switch (result.kind) {
    case Database::ExecResult::Kind::Ack:
      return result.ack + "\n";
    case Database::ExecResult::Kind::Count:
      return "(" + std::to_string(result.count) + " affected)\n";
    case Database::ExecResult::Kind::Results:
      return format_result(result.results, mode);
  }
  return "";
}

std::string Session::execute_text(const std::string& text) {
  Statement stmt = parse_statement(text);
  std::string rendered = format_exec_result(db_.run(stmt), mode_);
  history_.push_back(text);
  return rendered;
}

namespace {

void collect_foreign_targets(const std::vector<NestedTriple>& fragments,
                             std::vector<std::string>& out) {
  for (const auto& f : fragments) {
    switch (f.kind) {
      case NestedTriple::Kind::Leaf:
        if (f.leaf.constraint.target) out.push_back(f.leaf.constraint.target->object);
        break;
      case NestedTriple::Kind::MapNode:
        collect_foreign_targets(f.children, out);
        break;
      case NestedTriple::Kind::ListNode:
        if (f.element) {
          std::vector<NestedTriple> one{*f.element};
          collect_foreign_targets(one, out);
        }
        break;
    }
  }
}

std::vector<std::string> foreign_targets(const ObjectScheme& scheme) {
  std::vector<std::string> out;
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    for (const auto& c : rel->columns) {
      if (c.constraint.target) out.push_back(c.constraint.target->object);
    }
  } else if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    if (kv->key.constraint.target) out.push_back(kv->key.constraint.target->object);
    if (kv->value.constraint.target) out.push_back(kv->value.constraint.target->object);
  } else if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    collect_foreign_targets(doc->root, out);
  } else {
    const auto& graph = std::get<GraphScheme>(scheme);
    for (const auto& n : graph.nodes) collect_foreign_targets(n.properties, out);
    for (const auto& e : graph.edges) collect_foreign_targets(e.properties, out);
  }
  return out;
}

}  // namespace

std::string Session::snapshot_text() const {
  std::string out = std::string(kSnapshotHeader) + "\n";
  const Catalog& catalog = db_.catalog();
  for (const CatalogEntry* entry : catalog.entries()) {
    out += print_statement(CreateObject{entry->model, entry->name}) + ";\n";
  }
  // INITs replay in an order that respects explicit FOREIGN targets (such
  // an order always exists: INIT validates targets as already initialized).
  std::vector<const CatalogEntry*> pending;
  for (const CatalogEntry* entry : catalog.entries()) {
    if (entry->initialized()) pending.push_back(entry);
  }
  std::set<std::string> emitted;
  while (!pending.empty()) {
    bool progressed = false;
    for (auto it = pending.begin(); it != pending.end();) {
      bool ready = true;
      for (const std::string& dep : foreign_targets((*it)->scheme.value())) {
        if (dep != (*it)->name && catalog.find(dep) && catalog.find(dep)->initialized() &&
            !emitted.count(dep)) {
          ready = false;
          break;
        }
      }
      if (ready) {
        out += print_statement(InitObject{(*it)->model, (*it)->name, *(*it)->scheme}) + ";\n";
        emitted.insert((*it)->name);
        it = pending.erase(it);
        progressed = true;
      } else {
        ++it;
      }
    }
    if (!progressed) {
      // Unresolvable cycle (cannot arise through INIT); fall back to order.
      for (const CatalogEntry* entry : pending) {
        out += print_statement(InitObject{entry->model, entry->name, *entry->scheme}) + ";\n";
      }
      break;
    }
  }
  for (const ViewDef* view : catalog.views()) {
    CreateView stmt;
    stmt.vtype = view->vtype;
    stmt.name = view->name;
    stmt.query = Box<QueryStmt>(view->query);
    out += print_statement(stmt) + ";\n";
  }
  for (const CatalogEntry* entry : catalog.entries()) {
    if (!entry->initialized() || !db_.stores().exists(entry->name)) continue;
    for (const auto& [ref, item] : db_.stores().scan(entry->name)) {
      InsertStmt stmt;
      stmt.target.segments.push_back(entry->name);
      if (ref.kind == ItemRef::Kind::Node || ref.kind == ItemRef::Kind::Edge) {
        stmt.target.segments.push_back(ref.scheme);
      }
      stmt.items.push_back(InsertItem{false, item});
      out += print_statement(stmt) + ";\n";
    }
  }
  return out;
}

void Session::save_snapshot(const std::string& path) const {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
  file << snapshot_text();
  if (!file.good()) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

void Session::load_snapshot(const std::string& path, bool replace) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot read " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  std::string text = buffer.str();

  std::size_t newline = text.find('\n');
  std::string header = newline == std::string::npos ? text : text.substr(0, newline);
  if (header != kSnapshotHeader) {
    throw Error(ErrorCode::IoError, path + " is not a snapshot file (bad header)");
  }
  if (!empty()) {
    if (!replace) {
      throw Error(ErrorCode::NotEmpty, "session is not empty; pass --replace to overwrite");
    }
    db_.clear();
  }
  std::string script = newline == std::string::npos ? "" : text.substr(newline + 1);
  ScriptReader reader(script);
  while (!reader.at_end()) {
    SourcePos pos = reader.next_pos();
    try {
      db_.run(reader.next());
    } catch (const Error& e) {
      throw Error(e.code(), {pos.line + 1, pos.column},
                  "snapshot replay failed: " + e.message());
    }
  }
}

int run_script(Session& session, const std::string& path, bool keep_going, std::ostream& out,
               std::ostream& err) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    err << path << ": cannot read file\n";
    return 2;
  }
  std::stringstream buffer;
  buffer << file.rdbuf();

  int failures = 0;
  ScriptReader reader(buffer.str());
  while (!reader.at_end()) {
    SourcePos pos = reader.next_pos();
    try {
      Statement stmt = reader.next();
      out << format_exec_result(session.db().run(stmt), session.mode());
    } catch (const Error& e) {
      SourcePos at = e.pos().line > 0 ? e.pos() : pos;
      err << path << ":" << at.line << ":" << at.column << ": " << e.what() << "\n";
      ++failures;
      if (!keep_going) return 1;
      reader.resync();
    }
  }
  return failures ? 1 : 0;
}

namespace {

void print_caret(const std::string& buffer, const Error& e, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  if (e.pos().line <= 0) return;
  std::istringstream lines(buffer);
  std::string line;
  for (int i = 0; i < e.pos().line && std::getline(lines, line); ++i) {
  }
  err << "  " << line << "\n";
  err << "  " << std::string(std::max(0, e.pos().column - 1), ' ') << "^\n";
}

bool buffer_complete(const std::string& buffer) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(buffer);
  } catch (const Error& e) {
    // Unterminated strings and comments may continue on the next line;
    // anything else is complete enough to report.
    return e.message().find("unterminated") == std::string::npos;
  }
  for (std::size_t i = tokens.size(); i-- > 0;) {
    if (tokens[i].kind == TokenKind::End) continue;
    return tokens[i].is_punct(";");
  }
  return false;
}

void run_buffer(Session& session, const std::string& buffer, std::ostream& out,
                std::ostream& err) {
  try {
    ScriptReader reader(buffer);
    while (!reader.at_end()) {
      try {
        Statement stmt = reader.next();
        out << format_exec_result(session.db().run(stmt), session.mode());
        session.record(print_statement(stmt));
      } catch (const Error& e) {
        print_caret(buffer, e, err);
        reader.resync();
      }
    }
  } catch (const Error& e) {
    print_caret(buffer, e, err);  // the buffer does not even tokenize
  }
}

const char* kHelp =
    "statements end with ';' and may span lines\n"
    ".help            show this help\n"
    ".objects         list catalog objects and views\n"
    ".scheme NAME     print an object's scheme\n"
    ".save PATH       write a snapshot script\n"
    ".load PATH       replay a snapshot into an empty session\n"
    ".mode MODE       set output mode: table or json\n"
    ".quit            leave\n";

bool handle_meta(Session& session, const std::string& line, std::ostream& out,
                 std::ostream& err, bool& quit) {
  std::istringstream words(line);
  std::string command, arg;
  words >> command >> arg;
  if (command == ".quit" || command == ".exit") {
    quit = true;
    return true;
  }
  if (command == ".help") {
    out << kHelp;
    return true;
  }
  if (command == ".objects") {
    for (const CatalogEntry* entry : session.db().catalog().entries()) {
      out << model_type_name(entry->model) << " " << entry->name
          << (entry->initialized() ? "" : " (uninitialized)") << "\n";
    }
    for (const ViewDef* view : session.db().catalog().views()) {
      out << "VIEW " << view->name << "\n";
    }
    return true;
  }
  if (command == ".scheme") {
    try {
      const CatalogEntry& entry = session.db().catalog().get(arg);
      if (entry.initialized()) {
        out << print_scheme(*entry.scheme) << "\n";
      } else {
        out << arg << " is uninitialized\n";
      }
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    }
    return true;
  }
  if (command == ".save") {
    try {
      session.save_snapshot(arg);
      out << "saved " << arg << "\n";
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    }
    return true;
  }
  if (command == ".load") {
    try {
      session.load_snapshot(arg);
      out << "loaded " << arg << "\n";
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
    }
    return true;
  }
  if (command == ".mode") {
    if (arg == "table") {
      session.set_mode(OutputMode::Table);
    } else if (arg == "json") {
      session.set_mode(OutputMode::JsonText);
    } else {
      err << "error: unknown mode " << arg << " (table or json)\n";
    }
    return true;
  }
  err << "error: unknown command " << command << "\n";
  return true;
}

}  // namespace

int repl(Session& session, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string buffer;
  std::string line;
  out << "multisql (.help for help)\n";
  while (true) {
    out << (buffer.empty() ? "msql> " : "  ...> ");
    out.flush();
    if (!std::getline(in, line)) break;
    if (buffer.empty()) {
      std::string trimmed = line;
      trimmed.erase(0, trimmed.find_first_not_of(" \t"));
      if (!trimmed.empty() && trimmed[0] == '.') {
        bool quit = false;
        handle_meta(session, trimmed, out, err, quit);
        if (quit) return 0;
        continue;
      }
    }
    buffer += line;
    buffer += "\n";
    if (buffer_complete(buffer)) {
      run_buffer(session, buffer, out, err);
      buffer.clear();
    }
  }
  if (!buffer.empty() &&
      buffer.find_first_not_of(" \t\r\n") != std::string::npos) {
    run_buffer(session, buffer, out, err);
  }
  return 0;
}

}  // namespace msql
