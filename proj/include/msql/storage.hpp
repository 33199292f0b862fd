#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msql/scheme.hpp"
#include "msql/value.hpp"

namespace msql {

/// Stable handle to one stored element. Rows, docs and edges are addressed
/// by ordinal (insertion index), pairs and nodes by key.
struct ItemRef {
  enum class Kind { Row, Pair, Doc, Node, Edge };

  std::string object;
  Kind kind = Kind::Row;
  std::string scheme;  // node/edge scheme name, graphs only
  Value key;           // Pair / Node
  std::size_t ordinal = 0;  // Row / Doc / Edge

  bool operator==(const ItemRef& other) const;
};

/// Lexicographic order used to make PATH binding output deterministic.
bool item_ref_less(const ItemRef& a, const ItemRef& b);

struct GraphElementFilter {
  bool edges = false;
  std::string scheme;  // empty = any scheme of that kind
};

struct SetAction {
  // Assignment paths are relative to the item (object root already removed).
  std::vector<std::pair<std::vector<std::string>, Value>> assignments;
};

struct DeleteAction {};

using MutationAction = std::variant<DeleteAction, SetAction>;

struct GraphEdgeRecord {
  Value from;
  Value to;
  Value properties;  // declared properties only (no FROM/TO)
};

struct GraphStore {
  // Node maps are keyed for O(log n) identity lookup; edges keep insertion
  // order. Adjacency is maintained per edge scheme for O(degree) neighbors.
  std::map<std::string, std::map<Value, Value, ValueLess>> nodes;
  std::map<std::string, std::vector<GraphEdgeRecord>> edges;
  std::map<std::string, std::map<Value, std::vector<std::size_t>, ValueLess>> out_index;
  std::map<std::string, std::map<Value, std::vector<std::size_t>, ValueLess>> in_index;

  void rebuild_adjacency();
};

struct ObjectStore {
  std::string name;
  ModelType model = ModelType::Relation;
  ObjectScheme scheme;

  std::vector<Value> rows;                  // Relation
  std::map<Value, Value, ValueLess> pairs;  // KeyValue
  std::vector<Value> docs;                  // Document
  GraphStore graph;                         // Graph

  std::size_t item_count() const;
};

/// The set of initialized stores. Queries run against a logically immutable
/// snapshot; mutations apply between statements and are atomic per batch.
class StoreSet {
 public:
  /// Attaches an empty store for a freshly initialized object.
  void create(const std::string& name, ModelType model, ObjectScheme scheme);

  bool exists(const std::string& name) const;
  const ObjectStore& get(const std::string& name) const;  // throws UnknownObject

  /// Appends a batch. For graphs, `scheme_tag` names the node or edge scheme
  /// the items belong to. The whole batch inserts or the store is unchanged.
  std::size_t insert_items(const std::string& name, const std::string& scheme_tag,
                           const std::vector<Value>& items);

  /// Deterministic full scan: insertion order for rows/docs/edges, key order
  /// for pairs and nodes (graphs yield nodes before edges, scheme by scheme
  /// in declaration order).
  std::vector<std::pair<ItemRef, Value>> scan(
      const std::string& name, const std::optional<GraphElementFilter>& filter = {}) const;

  /// The KV mapping applied to one key.
  std::optional<Value> kv_lookup(const std::string& name, const Value& key) const;

  enum class Direction { Out, In };

  /// Edges incident to a node in one direction, with the neighbor node ref,
  /// in edge insertion order.
  std::vector<std::pair<ItemRef, ItemRef>> neighbors(const std::string& name,
                                                     const Value& node_key,
                                                     const std::string& edge_scheme,
                                                     Direction direction) const;

  /// Applies DELETE or SET to the referenced items atomically. Deleting a
  /// graph node cascades to its incident edges.
  std::size_t apply_mutation(const std::string& name, const std::vector<ItemRef>& refs,
                             const MutationAction& action);

  /// Resolves a ref to its current item value.
  Value fetch(const ObjectStore& store, const ItemRef& ref) const;

  void drop_all() { stores_.clear(); }

  // Instrumentation: items touched by scan/kv_lookup/neighbors since reset.
  void reset_visit_counts() { visits_.clear(); }
  std::size_t visit_count(const std::string& name) const;

  /// The (key attribute, value attribute) names of a KV store's pair items.
  static std::pair<std::string, std::string> kv_attr_names(const ObjectStore& store);

  /// Materializes an edge record as an item map with FROM/TO attributes.
  static Value edge_item(const GraphEdgeRecord& edge);

 private:
  ObjectStore& get_mutable(const std::string& name);
  void validate_store(const ObjectStore& store) const;

  std::map<std::string, ObjectStore> stores_;
  mutable std::map<std::string, std::size_t> visits_;
};

}  // namespace msql
