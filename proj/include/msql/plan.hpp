#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msql/ast.hpp"
#include "msql/storage.hpp"

namespace msql {

/// Flat column metadata for shaped (rule- or projection-built) items:
/// the output key plus the attribute path it was copied from. Nested
/// MapOut/ListOut columns have an empty source.
struct OutputColumn {
  std::string name;
  AttrPath source;

  bool operator==(const OutputColumn&) const = default;
};

/// How items flowing out of a plan node are addressed by attribute paths.
struct ShapeInfo {
  enum class Addressing {
    Direct,   // raw store items: root alias, then a key walk
    Columns,  // rule/projection outputs: resolve by column source paths
  };

  Addressing addressing = Addressing::Direct;
  std::string direct_alias;            // Direct
  std::vector<OutputColumn> columns;   // Columns
  // A name addressing the item set as a whole (an expanded view's name);
  // paths rooted here strip it and resolve against the columns.
  std::string self_alias;
  std::vector<std::string> aliases;    // every root this shape can cover
  ModelType model = ModelType::Relation;  // model of the originating base object

  bool covers(const std::string& root) const {
    for (const auto& a : aliases) {
      if (a == root) return true;
    }
    return false;
  }
};

/// Resolves a path against one item of the given shape; nullopt when the
/// path misses. Throws AmbiguousAttribute for bare names that resolve on
/// several columns.
std::optional<Value> resolve_in_item(const Value& item, const ShapeInfo& shape,
                                     const AttrPath& path);

/// Logical operator tree. Leaves carry the engine primitive chosen at the
/// second planning level (Scan, KvLookup or PathScan).
struct PlanNode {
  enum class Op { Scan, KvLookup, PathScan, Filter, Join, Project, Order, Distinct };

  Op op = Op::Scan;

  // Scan / KvLookup / PathScan
  std::string object;
  std::optional<GraphElementFilter> scan_filter;
  Value lookup_key;
  std::vector<PathStep> path_steps;

  // Filter
  FilterExpr filter;

  // Join
  JoinKind join_kind = JoinKind::OneToOne;
  AttributionList rule;
  std::vector<WithCond> with;
  bool hash_join = false;
  bool build_left = false;

  // Project
  AttributionList projection;
  bool identity = false;

  // Order
  std::vector<OrderKey> order_keys;

  std::vector<PlanNode> children;
  ShapeInfo shape;  // shape of this node's output items
};

/// One planned query: a root per '&' output object.
struct Plan {
  std::vector<PlanNode> roots;
  std::vector<std::string> labels;
};

struct OutputObject {
  std::string label;
  std::vector<OutputColumn> columns;
  std::vector<Value> items;
};

struct ResultSet {
  std::vector<OutputObject> outputs;

  std::size_t total_items() const {
    std::size_t n = 0;
    for (const auto& o : outputs) n += o.items.size();
    return n;
  }
};

}  // namespace msql
