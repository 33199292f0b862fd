#include "msql/catalog.hpp"

#include <algorithm>

#include "msql/error.hpp"

namespace msql {

bool Catalog::name_taken(const std::string& name) const {
  return entries_.count(name) > 0 || views_.count(name) > 0;
}

CatalogEntry& Catalog::create(ModelType type, const std::string& name) {
  if (name_taken(name)) {
    throw Error(ErrorCode::DuplicateName, "object " + name + " already exists");
  }
  auto [it, inserted] = entries_.emplace(name, CatalogEntry{name, type, std::nullopt});
  order_.push_back(name);
  return it->second;
}

CatalogEntry& Catalog::init(const std::string& name, ObjectScheme scheme) {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    throw Error(ErrorCode::UnknownObject, "object " + name + " has not been created");
  }
  CatalogEntry& entry = it->second;
  if (entry.initialized()) {
    throw Error(ErrorCode::AlreadyInitialized, "object " + name + " is already initialized");
  }
  if (scheme_model(scheme) != entry.model) {
    throw Error(ErrorCode::ModelMismatch,
                "object " + name + " was created as " + model_type_name(entry.model));
  }
  auto violations = validate_scheme(scheme, this);
  if (!violations.empty()) {
    throw Error(ErrorCode::SchemeInvalid, violations_to_string(violations));
  }
  entry.scheme = std::move(scheme);
  return entry;
}

ViewDef& Catalog::define_view(ViewType vtype, const std::string& name, QueryStmt query) {
  if (name_taken(name)) {
    throw Error(ErrorCode::DuplicateName, "name " + name + " already exists");
  }
  auto objects = referenced_objects(query);
  for (const auto& obj : objects) {
    if (!entries_.count(obj) && !views_.count(obj)) {
      throw Error(ErrorCode::UnknownObject, "view references unknown object " + obj);
    }
  }
  if (vtype == ViewType::Single && objects.size() != 1) {
    throw Error(ErrorCode::SchemeInvalid,
                "SINGLE view must reference exactly one object, found " +
                    std::to_string(objects.size()));
  }
  auto [it, inserted] = views_.emplace(name, ViewDef{name, vtype, std::move(query)});
  view_order_.push_back(name);
  return it->second;
}

const CatalogEntry* Catalog::find(const std::string& name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

const CatalogEntry& Catalog::get(const std::string& name) const {
  const CatalogEntry* entry = find(name);
  if (!entry) throw Error(ErrorCode::UnknownObject, "unknown object " + name);
  return *entry;
}

const ViewDef* Catalog::find_view(const std::string& name) const {
  auto it = views_.find(name);
  return it == views_.end() ? nullptr : &it->second;
}

std::vector<const CatalogEntry*> Catalog::entries() const {
  std::vector<const CatalogEntry*> out;
  out.reserve(order_.size());
  for (const auto& name : order_) out.push_back(&entries_.at(name));
  return out;
}

std::vector<const ViewDef*> Catalog::views() const {
  std::vector<const ViewDef*> out;
  out.reserve(view_order_.size());
  for (const auto& name : view_order_) out.push_back(&views_.at(name));
  return out;
}

void Catalog::drop_all() {
  entries_.clear();
  views_.clear();
  order_.clear();
  view_order_.clear();
}

namespace {

void collect_sources(const Source& source, std::vector<std::string>& out);

void collect_query(const QueryStmt& query, std::vector<std::string>& out) {
  if (const auto* select = std::get_if<SelectStmt>(&query.node)) {
    if (select->has_from) {
      for (const auto& src : select->from) collect_sources(src, out);
    } else {
      for (const auto& output : select->outputs) {
        for (const auto& attr : output.attrs) {
          if (attr.kind == NestedAttribution::Kind::AttrRef && !attr.ref.empty()) {
            out.push_back(attr.ref.root());
          }
        }
      }
    }
  } else {
    const auto& join = std::get<JoinSource>(query.node);
    collect_sources(*join.left, out);
    collect_sources(*join.right, out);
  }
}

void collect_sources(const Source& source, std::vector<std::string>& out) {
  if (const auto* ref = std::get_if<ObjectRef>(&source.node)) {
    out.push_back(ref->object());
  } else if (const auto* join = std::get_if<JoinSource>(&source.node)) {
    collect_sources(*join->left, out);
    collect_sources(*join->right, out);
  } else {
    const auto& select = std::get<Box<SelectStmt>>(source.node);
    QueryStmt q;
    q.node = *select;
    collect_query(q, out);
  }
}

}  // namespace

std::vector<std::string> referenced_objects(const QueryStmt& query) {
  std::vector<std::string> all;
  collect_query(query, all);
  std::vector<std::string> unique;
  for (auto& name : all) {
    if (std::find(unique.begin(), unique.end(), name) == unique.end()) {
      unique.push_back(name);
    }
  }
  return unique;
}

}  // namespace msql
