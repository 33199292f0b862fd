#pragma once

#include <string>
#include <vector>

#include "msql/ast.hpp"
#include "msql/catalog.hpp"
#include "msql/filters.hpp"
#include "msql/plan.hpp"
#include "msql/storage.hpp"

namespace msql {

/// Items paired with their addressing shape, as fed into joins.
struct ItemsWithShape {
  std::vector<Value> items;
  ShapeInfo shape;
};

/// Evaluates one join: pairs are matched by the WITH conditions (every
/// condition must evaluate True under eval_cmp) and output items are built
/// from the rule. A rule that nests non-anchor attributes under a ListOut
/// aggregates all matches into one output item per anchor item.
std::vector<Value> join_items(JoinKind kind, const AttributionList& rule,
                              const std::vector<WithCond>& with, const ItemsWithShape& left,
                              const ItemsWithShape& right, bool hash_accelerated,
                              bool build_left);

/// Output column metadata of a join rule (or projection list).
std::vector<OutputColumn> attribution_columns(const AttributionList& attrs);

/// Projects one item through an attribution list; missing paths yield Null.
Value project_item(const Value& item, const ShapeInfo& shape, const AttributionList& attrs);

/// TRANSFER legality: each co-relation pair must widen (identical tags,
/// INT -> STRING, element-wise lists, anything -> ANY) and every NOT_NULL or
/// PRIMARY target attribute must be covered by some pair.
std::vector<Violation> check_transfer_legality(const ObjectScheme& source,
                                               const ObjectScheme& target,
                                               const std::vector<CoRelPair>& co);

/// Converts one value along a legal widening (INT -> STRING renders decimal,
/// lists convert element-wise, everything else copies).
Value convert_widening(const Value& v, const TypeTag& source, const TypeTag& target);

/// Per-item predicate evaluation covering basic filters, MATCH and
/// registered calls (PATH is plan-level and rejected here).
TriBool eval_filter_item(const FilterExpr& f, const Value& item, const ShapeInfo& shape,
                         const FilterFamily& registry);

/// One engine instance: catalog + stores + filter registry, with two-level
/// query planning. Queries run pure over the current snapshot; DML applies
/// between statements (single writer).
class Database {
 public:
  Catalog& catalog() { return catalog_; }
  const Catalog& catalog() const { return catalog_; }
  StoreSet& stores() { return stores_; }
  const StoreSet& stores() const { return stores_; }
  FilterFamily& filters() { return filters_; }
  const FilterFamily& filters() const { return filters_; }

  struct ExecResult {
    enum class Kind { Ack, Count, Results };
    Kind kind = Kind::Ack;
    std::string ack;
    std::size_t count = 0;
    ResultSet results;
  };

  /// Executes any statement, dispatching to DDL, query, DML or TRANSFER.
  ExecResult run(const Statement& stmt);

  /// First level: view expansion, WHERE-conjunct assignment and pushdown,
  /// join planning. Second level: per-engine primitive selection (KvLookup,
  /// PathScan, hash joins). `optimized = false` produces the naive plan:
  /// every filter evaluated at the top of its source, scans everywhere,
  /// nested-loop joins.
  Plan plan(const QueryStmt& query, bool optimized = true) const;

  ResultSet execute(const Plan& plan) const;

  ResultSet query(const QueryStmt& q, bool optimized = true) const {
    return execute(plan(q, optimized));
  }

  std::size_t execute_insert(const InsertStmt& stmt);
  std::size_t execute_update(const UpdateStmt& stmt);
  std::size_t execute_delete(const DeleteStmt& stmt);
  std::size_t execute_transfer(const TransferStmt& stmt);

  void clear();

 private:
  ItemsWithShape execute_node(const PlanNode& node) const;
  std::vector<std::pair<ItemRef, Value>> select_refs(const ObjectRef& target,
                                                     const FilterExpr& where) const;

  Catalog catalog_;
  StoreSet stores_;
  FilterFamily filters_;
};

}  // namespace msql
