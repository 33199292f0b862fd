#include "msql/printer.hpp"

#include <string>

namespace msql {

const char* cmp_op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Gt: return ">";
    case CmpOp::Le: return "<=";
    case CmpOp::Ge: return ">=";
    case CmpOp::In: return "IN";
  }
  return "=";
}

const char* join_kind_text(JoinKind k) {
  switch (k) {
    case JoinKind::OneToOne: return "JOIN";
    case JoinKind::OneToMany: return "OM JOIN";
    case JoinKind::Left: return "LEFT JOIN";
    case JoinKind::Right: return "RIGHT JOIN";
  }
  return "JOIN";
}

std::string AttrPath::dotted() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += ".";
    out += segments[i];
  }
  return out;
}

std::string ObjectRef::dotted() const {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += ".";
    out += segments[i];
  }
  return out;
}

namespace {

std::string join_strings(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string print_constraint(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::None: return "";
    case Constraint::Kind::Primary: return "PRIMARY";
    case Constraint::Kind::NotNull: return "NOT_NULL";
    case Constraint::Kind::Foreign:
      if (c.target) return "FOREIGN(" + c.target->object + "." + c.target->attribute + ")";
      return "FOREIGN";
  }
  return "";
}

std::string print_triple(const Triple& t) {
  std::string out = "(" + t.name + ", " + print_type_tag(t.type);
  std::string c = print_constraint(t.constraint);
  if (!c.empty()) out += ", " + c;
  out += ")";
  return out;
}

std::string print_fragment(const NestedTriple& f);

std::string print_fragment_list(const std::vector<NestedTriple>& fragments) {
  std::vector<std::string> parts;
  parts.reserve(fragments.size());
  for (const auto& f : fragments) parts.push_back(print_fragment(f));
  return join_strings(parts, ", ");
}

std::string print_list_element(const NestedTriple& element) {
  switch (element.kind) {
    case NestedTriple::Kind::Leaf:
      return print_triple(element.leaf);
    case NestedTriple::Kind::MapNode:
      return "{" + print_fragment_list(element.children) + "}";
    case NestedTriple::Kind::ListNode:
      return "LIST OF " + print_list_element(*element.element);
  }
  return "";
}

std::string print_fragment(const NestedTriple& f) {
  switch (f.kind) {
    case NestedTriple::Kind::Leaf:
      return print_triple(f.leaf);
    case NestedTriple::Kind::MapNode:
      return f.name + ": {" + print_fragment_list(f.children) + "}";
    case NestedTriple::Kind::ListNode:
      return f.name + ": LIST OF " + print_list_element(*f.element);
  }
  return "";
}

std::string print_match_entry(const MatchEntry& e) {
  switch (e.kind) {
    case MatchEntry::Kind::Pred:
      return std::string("{") + cmp_op_text(e.pred.op) + ", " + print_value(e.pred.value) + "}";
    case MatchEntry::Kind::Sub:
      return print_pattern(*e.pattern);
    case MatchEntry::Kind::List:
      return "LIST OF " + print_pattern(*e.pattern);
  }
  return "{}";
}

std::string print_path_steps(const std::vector<PathStep>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const PathStep& s = steps[i];
    if (s.is_edge) {
      const char* arrow = s.direction == PathDirection::Forward ? " -> " : " <- ";
      out += arrow;
      out += s.scheme_name + ": " + print_pattern(s.pattern);
      out += arrow;
    } else {
      out += s.scheme_name + ": " + print_pattern(s.pattern);
    }
  }
  return out;
}

int filter_precedence(const FilterExpr& f) {
  if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
    switch (logical->op) {
      case LogicalOp::Or: return 1;
      case LogicalOp::And: return 2;
      case LogicalOp::Xor: return 3;
      case LogicalOp::Not: return 4;
    }
  }
  return 5;
}

std::string print_filter_prec(const FilterExpr& f, int parent_prec) {
  int prec = filter_precedence(f);
  std::string body;
  if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
    if (logical->op == LogicalOp::Not) {
      body = "NOT (" + print_filter_prec(logical->children.front(), 0) + ")";
    } else {
      const char* sep = logical->op == LogicalOp::And ? " AND "
                        : logical->op == LogicalOp::Or ? " OR "
                                                       : " XOR ";
      std::vector<std::string> parts;
      for (const auto& child : logical->children) {
        parts.push_back(print_filter_prec(child, prec));
      }
      body = join_strings(parts, sep);
    }
  } else {
    body = print_filter(f);
  }
  if (prec <= parent_prec) return "(" + body + ")";
  return body;
}

std::string print_attribution_children(const std::vector<NestedAttribution>& children) {
  std::vector<std::string> parts;
  parts.reserve(children.size());
  for (const auto& c : children) parts.push_back(print_attribution(c));
  return join_strings(parts, ", ");
}

std::string print_attribution_list(const AttributionList& list) {
  if (list.braced) return "{" + print_attribution_children(list.attrs) + "}";
  return print_attribution_children(list.attrs);
}

std::string print_source(const Source& src);

std::string print_join(const JoinSource& join) {
  std::string out = join_kind_text(join.kind);
  out += " " + print_source(*join.left) + ", " + print_source(*join.right);
  out += " RULE " + print_attribution_list(join.rule);
  out += " WITH ";
  std::vector<std::string> conds;
  for (const auto& c : join.with) {
    conds.push_back(c.lhs.dotted() + " " + cmp_op_text(c.op) + " " + c.rhs.dotted());
  }
  out += join_strings(conds, ", ");
  return out;
}

std::string print_select(const SelectStmt& stmt) {
  std::string out = "SELECT ";
  if (stmt.distinct) out += "DISTINCT ";
  std::vector<std::string> outputs;
  for (const auto& o : stmt.outputs) outputs.push_back(print_attribution_list(o));
  out += join_strings(outputs, " & ");
  if (stmt.has_from) {
    out += " FROM ";
    std::vector<std::string> sources;
    for (const auto& s : stmt.from) sources.push_back(print_source(s));
    out += join_strings(sources, ", ");
  }
  if (!stmt.where.is_null()) {
    out += " WHERE " + print_filter(stmt.where);
  }
  if (!stmt.order.empty()) {
    out += " ORDER BY ";
    std::vector<std::string> keys;
    for (const auto& k : stmt.order) {
      keys.push_back(k.path.dotted() + (k.ascending ? " ASC" : " DESC"));
    }
    out += join_strings(keys, ", ");
  }
  return out;
}

std::string print_source(const Source& src) {
  if (const auto* ref = std::get_if<ObjectRef>(&src.node)) return ref->dotted();
  if (const auto* join = std::get_if<JoinSource>(&src.node)) return print_join(*join);
  return "(" + print_select(*std::get<Box<SelectStmt>>(src.node)) + ")";
}

std::string print_insert_item(const InsertItem& item) {
  if (item.tuple) {
    std::vector<std::string> parts;
    for (const auto& v : item.value.elements()) parts.push_back(print_value(v));
    return "(" + join_strings(parts, ", ") + ")";
  }
  return print_value(item.value);
}

struct StatementPrinter {
  std::string operator()(const CreateObject& s) const {
    return std::string("CREATE ") + model_type_name(s.type) + " " + s.name;
  }
  std::string operator()(const InitObject& s) const {
    return std::string("INIT ") + model_type_name(s.type) + " " + s.name + " WITH " +
           print_scheme(s.scheme);
  }
  std::string operator()(const CreateView& s) const {
    return std::string("CREATE VIEW ") + (s.vtype == ViewType::Multi ? "MULTI" : "SINGLE") + " " +
           s.name + " AS " + print_query(*s.query);
  }
  std::string operator()(const QueryStmt& s) const { return print_query(s); }
  std::string operator()(const InsertStmt& s) const {
    std::string out = "INSERT " + s.target.dotted();
    if (s.query) {
      out += " QUERY " + print_query(*s.query);
    } else {
      out += " MULTIVAL ";
      std::vector<std::string> parts;
      for (const auto& item : s.items) parts.push_back(print_insert_item(item));
      out += join_strings(parts, ", ");
    }
    return out;
  }
  std::string operator()(const UpdateStmt& s) const {
    std::string out = "UPDATE " + s.target.dotted() + " SET ";
    std::vector<std::string> parts;
    for (const auto& a : s.sets) parts.push_back(a.path.dotted() + " := " + print_value(a.value));
    out += join_strings(parts, ", ");
    if (!s.where.is_null()) out += " WHERE " + print_filter(s.where);
    return out;
  }
  std::string operator()(const DeleteStmt& s) const {
    std::string out = "DELETE " + s.target.dotted();
    if (!s.where.is_null()) out += " WHERE " + print_filter(s.where);
    return out;
  }
  std::string operator()(const TransferStmt& s) const {
    std::string out = "TRANSFER ";
    out += s.source_object ? s.source_object->dotted() : print_query(*s.source_query);
    out += " INTO " + s.target + " WITH ";
    std::vector<std::string> parts;
    for (const auto& p : s.co_relation) {
      parts.push_back(p.source.dotted() + " : " + p.target.dotted());
    }
    out += join_strings(parts, ", ");
    return out;
  }
};

}  // namespace

std::string print_type_tag(const TypeTag& tag) {
  switch (tag.kind) {
    case TypeTag::Kind::Int: return "INT";
    case TypeTag::Kind::String: return "STRING";
    case TypeTag::Kind::Bool: return "BOOL";
    case TypeTag::Kind::Map: return "MAP";
    case TypeTag::Kind::Any: return "ANY";
    case TypeTag::Kind::List: return "LIST OF " + print_type_tag(*tag.element);
  }
  return "ANY";
}

std::string print_scheme(const ObjectScheme& scheme) {
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    std::vector<std::string> parts;
    for (const auto& c : rel->columns) parts.push_back(print_triple(c));
    return join_strings(parts, ", ");
  }
  if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    return "{" + print_triple(kv->key) + ", " + print_triple(kv->value) + "}";
  }
  if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    return "{" + print_fragment_list(doc->root) + "}";
  }
  const auto& graph = std::get<GraphScheme>(scheme);
  std::vector<std::string> parts;
  for (const auto& n : graph.nodes) {
    parts.push_back("NODE " + n.name + " {" + print_fragment_list(n.properties) + "}");
  }
  for (const auto& e : graph.edges) {
    std::string edge = "EDGE " + e.name + " {FROM: " + e.from_scheme + ", TO: " + e.to_scheme;
    if (!e.properties.empty()) edge += ", " + print_fragment_list(e.properties);
    edge += "}";
    parts.push_back(edge);
  }
  return join_strings(parts, ", ");
}

std::string print_pattern(const MatchPattern& pattern) {
  if (pattern.is_wildcard()) return "{}";
  std::vector<std::string> parts;
  for (const auto& [attr, entry] : pattern.entries) {
    parts.push_back(attr + ": " + print_match_entry(entry));
  }
  return "{" + join_strings(parts, ", ") + "}";
}

std::string print_attribution(const NestedAttribution& attr) {
  switch (attr.kind) {
    case NestedAttribution::Kind::AttrRef:
      return attr.ref.dotted();
    case NestedAttribution::Kind::MapOut:
      if (attr.name.empty()) return "{" + print_attribution_children(attr.children) + "}";
      return attr.name + ": {" + print_attribution_children(attr.children) + "}";
    case NestedAttribution::Kind::ListOut:
      return attr.name + ": [" + print_attribution_children(attr.children) + "]";
  }
  return "";
}

std::string print_filter(const FilterExpr& filter) {
  if (std::holds_alternative<NullFilter>(filter.node)) return "NULL";
  if (const auto* cmp = std::get_if<CmpFilter>(&filter.node)) {
    std::string rhs = std::holds_alternative<Value>(cmp->rhs)
                          ? print_value(std::get<Value>(cmp->rhs))
                          : std::get<AttrPath>(cmp->rhs).dotted();
    return cmp->lhs.dotted() + " " + cmp_op_text(cmp->op) + " " + rhs;
  }
  if (const auto* match = std::get_if<MatchFilter>(&filter.node)) {
    return "MATCH " + match->object.dotted() + " " + print_pattern(match->pattern);
  }
  if (const auto* path = std::get_if<PathFilter>(&filter.node)) {
    return "PATH " + print_path_steps(path->steps);
  }
  if (const auto* call = std::get_if<CallFilter>(&filter.node)) {
    std::string out = call->name + "(" + call->object.dotted();
    for (const auto& arg : call->args) out += ", " + print_value(arg);
    return out + ")";
  }
  return print_filter_prec(filter, 0);
}

std::string print_query(const QueryStmt& query) {
  if (const auto* select = std::get_if<SelectStmt>(&query.node)) return print_select(*select);
  return print_join(std::get<JoinSource>(query.node));
}

std::string print_statement(const Statement& stmt) {
  return std::visit(StatementPrinter{}, stmt);
}

}  // namespace msql
