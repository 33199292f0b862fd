#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msql/ast.hpp"
#include "msql/scheme.hpp"

namespace msql {

struct CatalogEntry {
  std::string name;
  ModelType model = ModelType::Relation;
  std::optional<ObjectScheme> scheme;  // nullopt until INIT

  bool initialized() const { return scheme.has_value(); }
};

struct ViewDef {
  std::string name;
  ViewType vtype = ViewType::Multi;
  QueryStmt query;
};

/// Named objects and views. Object names and view names share one namespace.
class Catalog {
 public:
  /// CREATE: claims a name for a model type. Throws DuplicateName.
  CatalogEntry& create(ModelType type, const std::string& name);

  /// INIT: one-shot scheme attachment. Throws UnknownObject, ModelMismatch,
  /// AlreadyInitialized, or SchemeInvalid (with the violation list).
  CatalogEntry& init(const std::string& name, ObjectScheme scheme);

  /// CREATE VIEW. The query must already be parsed; objects it references
  /// must exist, and SINGLE views must reference exactly one stored object.
  ViewDef& define_view(ViewType vtype, const std::string& name, QueryStmt query);

  const CatalogEntry* find(const std::string& name) const;
  const CatalogEntry& get(const std::string& name) const;  // throws UnknownObject
  const ViewDef* find_view(const std::string& name) const;

  bool empty() const { return entries_.empty() && views_.empty(); }
  /// Entries and views in creation order (snapshots replay in this order,
  /// so name choices cannot break FOREIGN or view dependencies).
  std::vector<const CatalogEntry*> entries() const;
  std::vector<const ViewDef*> views() const;

  void drop_all();

 private:
  bool name_taken(const std::string& name) const;

  std::map<std::string, CatalogEntry> entries_;
  std::map<std::string, ViewDef> views_;
  std::vector<std::string> order_;
  std::vector<std::string> view_order_;
};

/// Object names referenced by a query's FROM sources (views included),
/// in first-appearance order. Used for view validation.
std::vector<std::string> referenced_objects(const QueryStmt& query);

}  // namespace msql
