#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msql/box.hpp"
#include "msql/scheme.hpp"
#include "msql/value.hpp"

namespace msql {

/// Dotted attribute chain rooted at an object (or source alias) name.
struct AttrPath {
  std::vector<std::string> segments;

  AttrPath() = default;
  explicit AttrPath(std::vector<std::string> segs) : segments(std::move(segs)) {}

  const std::string& root() const { return segments.front(); }
  bool empty() const { return segments.empty(); }
  std::string dotted() const;

  bool operator==(const AttrPath&) const = default;
};

enum class CmpOp { Eq, Lt, Gt, Le, Ge, In };

const char* cmp_op_text(CmpOp op);

// ---------------------------------------------------------------------------
// MATCH patterns and PATH steps

struct MatchPattern;

struct MatchPred {
  CmpOp op = CmpOp::Eq;
  Value value;

  bool operator==(const MatchPred&) const = default;
};

struct MatchEntry {
  enum class Kind { Pred, Sub, List };

  Kind kind = Kind::Pred;
  MatchPred pred;               // Pred
  Box<MatchPattern> pattern;    // Sub / List element pattern

  bool operator==(const MatchEntry&) const = default;
};

/// Structural pattern: attribute name -> predicate, sub-pattern, or list
/// pattern. The empty pattern { } is the wildcard and matches anything.
struct MatchPattern {
  std::vector<std::pair<std::string, MatchEntry>> entries;

  bool is_wildcard() const { return entries.empty(); }

  bool operator==(const MatchPattern&) const = default;
};

enum class PathDirection { Forward, Backward };

/// One element of a PATH sigma; node and edge steps strictly alternate and
/// the sequence starts and ends with a node step.
struct PathStep {
  bool is_edge = false;
  std::string scheme_name;
  MatchPattern pattern;
  PathDirection direction = PathDirection::Forward;  // edges only

  bool operator==(const PathStep&) const = default;
};

// ---------------------------------------------------------------------------
// Filters

struct FilterExpr;

struct CmpFilter {
  AttrPath lhs;
  CmpOp op = CmpOp::Eq;
  std::variant<Value, AttrPath> rhs;

  bool operator==(const CmpFilter&) const = default;
};

enum class LogicalOp { And, Or, Not, Xor };

struct LogicalFilter {
  LogicalOp op = LogicalOp::And;
  std::vector<FilterExpr> children;  // NOT has exactly one, others >= 2

  bool operator==(const LogicalFilter&) const;
};

struct MatchFilter {
  AttrPath object;  // object name, or graph.scheme for node/edge matching
  MatchPattern pattern;

  bool operator==(const MatchFilter&) const = default;
};

struct PathFilter {
  std::vector<PathStep> steps;

  bool operator==(const PathFilter&) const = default;
};

/// Invocation of a registered filter: NAME(object, literal args...).
struct CallFilter {
  std::string name;
  AttrPath object;
  std::vector<Value> args;

  bool operator==(const CallFilter&) const = default;
};

struct NullFilter {
  bool operator==(const NullFilter&) const = default;
};

struct FilterExpr {
  std::variant<NullFilter, CmpFilter, LogicalFilter, MatchFilter, PathFilter, CallFilter> node;

  FilterExpr() : node(NullFilter{}) {}
  template <typename T>
  FilterExpr(T value) : node(std::move(value)) {}

  bool is_null() const { return std::holds_alternative<NullFilter>(node); }

  bool operator==(const FilterExpr&) const = default;
};

inline bool LogicalFilter::operator==(const LogicalFilter& other) const {
  return op == other.op && children == other.children;
}

// ---------------------------------------------------------------------------
// Result schemes

struct NestedAttribution;

/// One '&'-separated output object of a SELECT (or a join RULE body).
/// `braced` records the explicit document shape {...}.
struct AttributionList {
  bool braced = false;
  std::vector<NestedAttribution> attrs;

  bool operator==(const AttributionList&) const;
};

struct NestedAttribution {
  enum class Kind { AttrRef, MapOut, ListOut };

  Kind kind = Kind::AttrRef;
  AttrPath ref;                            // AttrRef
  std::string name;                        // MapOut / ListOut output key
  std::vector<NestedAttribution> children; // MapOut / ListOut

  static NestedAttribution attr(AttrPath p) {
    NestedAttribution a;
    a.kind = Kind::AttrRef;
    a.ref = std::move(p);
    return a;
  }
  static NestedAttribution map_out(std::string name, std::vector<NestedAttribution> children) {
    NestedAttribution a;
    a.kind = Kind::MapOut;
    a.name = std::move(name);
    a.children = std::move(children);
    return a;
  }
  static NestedAttribution list_out(std::string name, std::vector<NestedAttribution> children) {
    NestedAttribution a;
    a.kind = Kind::ListOut;
    a.name = std::move(name);
    a.children = std::move(children);
    return a;
  }

  /// Output key: MapOut/ListOut name, or the last path segment for refs.
  const std::string& output_key() const {
    return kind == Kind::AttrRef ? ref.segments.back() : name;
  }

  bool operator==(const NestedAttribution&) const = default;
};

inline bool AttributionList::operator==(const AttributionList& other) const {
  return braced == other.braced && attrs == other.attrs;
}

// ---------------------------------------------------------------------------
// Queries

enum class JoinKind { OneToOne, OneToMany, Left, Right };

const char* join_kind_text(JoinKind k);

struct Source;

struct WithCond {
  AttrPath lhs;
  CmpOp op = CmpOp::Eq;  // Eq/Lt/Gt/Le/Ge between attribute paths
  AttrPath rhs;

  bool operator==(const WithCond&) const = default;
};

struct JoinSource {
  JoinKind kind = JoinKind::OneToOne;
  Box<Source> left;
  Box<Source> right;
  AttributionList rule;
  std::vector<WithCond> with;

  bool operator==(const JoinSource&) const = default;
};

struct SelectStmt;

struct ObjectRef {
  // Object name, optionally scheme-qualified for graphs (G.Person).
  std::vector<std::string> segments;

  const std::string& object() const { return segments.front(); }
  bool qualified() const { return segments.size() > 1; }
  std::string dotted() const;
  /// Source alias: the last segment (scheme name for qualified refs).
  const std::string& alias() const { return segments.back(); }

  bool operator==(const ObjectRef&) const = default;
};

struct Source {
  std::variant<ObjectRef, JoinSource, Box<SelectStmt>> node;
  // Set by the planner when this source is an inlined view body; the view
  // name stays addressable as an alias. Never produced by the parser and
  // ignored by printing and comparison.
  std::string view_alias;

  bool operator==(const Source&) const;
};

struct OrderKey {
  AttrPath path;
  bool ascending = true;

  bool operator==(const OrderKey&) const = default;
};

struct SelectStmt {
  bool distinct = false;
  std::vector<AttributionList> outputs;  // '&'-separated
  bool has_from = false;
  std::vector<Source> from;
  FilterExpr where;
  std::vector<OrderKey> order;

  bool operator==(const SelectStmt&) const = default;
};

inline bool Source::operator==(const Source& other) const { return node == other.node; }

/// A query statement: either a SELECT or a bare JOIN expression (which
/// yields the join output with identity projection).
struct QueryStmt {
  std::variant<SelectStmt, JoinSource> node;

  bool operator==(const QueryStmt&) const = default;
};

// ---------------------------------------------------------------------------
// DDL statements

struct CreateObject {
  ModelType type = ModelType::Relation;
  std::string name;

  bool operator==(const CreateObject&) const = default;
};

struct InitObject {
  ModelType type = ModelType::Relation;
  std::string name;
  ObjectScheme scheme;

  bool operator==(const InitObject&) const = default;
};

enum class ViewType { Multi, Single };

struct CreateView {
  ViewType vtype = ViewType::Multi;
  std::string name;
  Box<QueryStmt> query;

  bool operator==(const CreateView&) const = default;
};

// ---------------------------------------------------------------------------
// DML statements

/// A MULTIVAL item: `tuple` marks the positional parenthesized form, which
/// maps onto relational columns (or the KV pair) by position.
struct InsertItem {
  bool tuple = false;
  Value value;  // List for tuples, any value otherwise

  bool operator==(const InsertItem&) const = default;
};

struct InsertStmt {
  ObjectRef target;
  std::vector<InsertItem> items;  // MULTIVAL form
  Box<QueryStmt> query;           // QUERY form (items empty)

  bool operator==(const InsertStmt&) const = default;
};

struct Assignment {
  AttrPath path;
  Value value;

  bool operator==(const Assignment&) const = default;
};

struct UpdateStmt {
  ObjectRef target;
  std::vector<Assignment> sets;
  FilterExpr where;

  bool operator==(const UpdateStmt&) const = default;
};

struct DeleteStmt {
  ObjectRef target;
  FilterExpr where;

  bool operator==(const DeleteStmt&) const = default;
};

struct CoRelPair {
  AttrPath source;
  AttrPath target;

  bool operator==(const CoRelPair&) const = default;
};

struct TransferStmt {
  // Source is either a stored object or a query result.
  std::optional<ObjectRef> source_object;
  Box<QueryStmt> source_query;
  std::string target;
  std::vector<CoRelPair> co_relation;

  bool operator==(const TransferStmt&) const = default;
};

using Statement = std::variant<CreateObject, InitObject, CreateView, QueryStmt, InsertStmt,
                               UpdateStmt, DeleteStmt, TransferStmt>;

}  // namespace msql
