#include "msql/scheme.hpp"

#include <algorithm>
#include <set>

#include "msql/catalog.hpp"

namespace msql {

const char* model_type_name(ModelType t) {
  switch (t) {
    case ModelType::Relation: return "RELATION";
    case ModelType::KeyValue: return "KV";
    case ModelType::Document: return "DOCUMENT";
    case ModelType::Graph: return "GRAPH";
  }
  return "?";
}

const Triple* RelationalScheme::primary_column() const {
  for (const auto& c : columns) {
    if (c.constraint.kind == Constraint::Kind::Primary) return &c;
  }
  return nullptr;
}

const Triple* RelationalScheme::column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const Triple* NodeScheme::key_triple() const {
  for (const auto& p : properties) {
    if (p.kind == NestedTriple::Kind::Leaf &&
        p.leaf.constraint.kind == Constraint::Kind::Primary) {
      return &p.leaf;
    }
  }
  return nullptr;
}

const NodeScheme* GraphScheme::node(const std::string& name) const {
  for (const auto& n : nodes) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

const EdgeScheme* GraphScheme::edge(const std::string& name) const {
  for (const auto& e : edges) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

ModelType scheme_model(const ObjectScheme& scheme) {
  switch (scheme.index()) {
    case 0: return ModelType::Relation;
    case 1: return ModelType::KeyValue;
    case 2: return ModelType::Document;
    default: return std::holds_alternative<DocumentScheme>(scheme) ? ModelType::Document
                                                                   : ModelType::Graph;
  }
}

namespace {

std::optional<TypeTag> fragment_attr_type(const std::vector<NestedTriple>& fragments,
                                          const std::vector<std::string>& path,
                                          std::size_t at) {
  if (at >= path.size()) return std::nullopt;
  for (const auto& f : fragments) {
    if (f.attr_name() != path[at]) continue;
    switch (f.kind) {
      case NestedTriple::Kind::Leaf:
        if (at + 1 == path.size()) return f.leaf.type;
        return std::nullopt;
      case NestedTriple::Kind::MapNode:
        if (at + 1 == path.size()) return TypeTag::of(TypeTag::Kind::Map);
        return fragment_attr_type(f.children, path, at + 1);
      case NestedTriple::Kind::ListNode:
        if (at + 1 == path.size()) {
          // Element domains are structural; expose the list as LIST OF ANY
          // unless the element is a plain leaf.
          if (f.element && f.element->kind == NestedTriple::Kind::Leaf) {
            return TypeTag::list_of(f.element->leaf.type);
          }
          return TypeTag::list_of(TypeTag::of(TypeTag::Kind::Any));
        }
        return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<TypeTag> scheme_attr_type(const ObjectScheme& scheme,
                                        const std::vector<std::string>& path) {
  if (path.empty()) return std::nullopt;
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    if (path.size() != 1) return std::nullopt;
    if (const Triple* c = rel->column(path[0])) return c->type;
    return std::nullopt;
  }
  if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    if (path.size() != 1) return std::nullopt;
    if (kv->key.name == path[0]) return kv->key.type;
    if (kv->value.name == path[0]) return kv->value.type;
    return std::nullopt;
  }
  if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    return fragment_attr_type(doc->root, path, 0);
  }
  const auto& graph = std::get<GraphScheme>(scheme);
  // Graph paths are scheme-qualified: Person.name, Relation.type. FROM/TO
  // on edges carry the key type of the referenced node scheme.
  if (path.size() < 2) return std::nullopt;
  std::vector<std::string> rest(path.begin() + 1, path.end());
  if (const NodeScheme* n = graph.node(path[0])) {
    return fragment_attr_type(n->properties, rest, 0);
  }
  if (const EdgeScheme* e = graph.edge(path[0])) {
    if (rest.size() == 1 && (rest[0] == "FROM" || rest[0] == "TO")) {
      const NodeScheme* n = graph.node(rest[0] == "FROM" ? e->from_scheme : e->to_scheme);
      if (n && n->key_triple()) return n->key_triple()->type;
      return std::nullopt;
    }
    return fragment_attr_type(e->properties, rest, 0);
  }
  return std::nullopt;
}

bool value_matches_tag(const Value& v, const TypeTag& tag) {
  switch (tag.kind) {
    case TypeTag::Kind::Any: return true;
    case TypeTag::Kind::Int: return v.is_int();
    case TypeTag::Kind::String: return v.is_str();
    case TypeTag::Kind::Bool: return v.is_bool();
    case TypeTag::Kind::Map: return v.is_map();
    case TypeTag::Kind::List: {
      if (!v.is_list()) return false;
      if (!tag.element) return true;
      for (const auto& e : v.elements()) {
        if (!e.is_null() && !value_matches_tag(e, *tag.element)) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

void check_fragment(const Value& item, const NestedTriple& fragment, const std::string& path,
                    std::vector<Violation>& out);

std::string child_path(const std::string& base, const std::string& name) {
  return base.empty() ? name : base + "." + name;
}

void check_leaf(const Value& item, const Triple& triple, const std::string& path,
                std::vector<Violation>& out) {
  if (item.is_null()) {
    if (triple.constraint.kind == Constraint::Kind::NotNull ||
        triple.constraint.kind == Constraint::Kind::Primary) {
      out.push_back({path, "null value violates " +
                               std::string(triple.constraint.kind == Constraint::Kind::Primary
                                               ? "PRIMARY"
                                               : "NOT_NULL")});
    }
    return;
  }
  if (!value_matches_tag(item, triple.type)) {
    out.push_back({path, "value does not match declared type"});
  }
}

void check_fragments(const Value& item, const std::vector<NestedTriple>& fragments,
                     const std::string& path, std::vector<Violation>& out) {
  if (!item.is_map()) {
    out.push_back({path, "expected a map value"});
    return;
  }
  std::set<std::string> declared;
  for (const auto& f : fragments) {
    declared.insert(f.attr_name());
    const Value* child = item.find(f.attr_name());
    if (!child) {
      out.push_back({child_path(path, f.attr_name()), "missing attribute"});
      continue;
    }
    check_fragment(*child, f, child_path(path, f.attr_name()), out);
  }
  for (const auto& [k, v] : item.entries()) {
    if (!declared.count(k)) {
      out.push_back({child_path(path, k), "unexpected key " + k});
    }
  }
}

void check_fragment(const Value& item, const NestedTriple& fragment, const std::string& path,
                    std::vector<Violation>& out) {
  switch (fragment.kind) {
    case NestedTriple::Kind::Leaf:
      check_leaf(item, fragment.leaf, path, out);
      return;
    case NestedTriple::Kind::MapNode:
      check_fragments(item, fragment.children, path, out);
      return;
    case NestedTriple::Kind::ListNode: {
      if (!item.is_list()) {
        out.push_back({path, "expected a list value"});
        return;
      }
      for (std::size_t i = 0; i < item.elements().size(); ++i) {
        check_fragment(item.elements()[i], *fragment.element,
                       path + "[" + std::to_string(i) + "]", out);
      }
      return;
    }
  }
}

}  // namespace

std::vector<Violation> conforms(const Value& item, const NestedTriple& fragment) {
  std::vector<Violation> out;
  check_fragment(item, fragment, fragment.attr_name(), out);
  return out;
}

std::vector<Violation> conforms(const Value& item, const Triple& triple) {
  std::vector<Violation> out;
  check_leaf(item, triple, triple.name, out);
  return out;
}

std::vector<Violation> conforms_fragments(const Value& item,
                                          const std::vector<NestedTriple>& fragments) {
  std::vector<Violation> out;
  check_fragments(item, fragments, "", out);
  return out;
}

namespace {

void validate_fragments(const std::vector<NestedTriple>& fragments, const std::string& path,
                        std::vector<Violation>& out);

// `named` is false in list-element position, where fragments are anonymous.
void validate_fragment(const NestedTriple& f, const std::string& path, bool named,
                       std::vector<Violation>& out) {
  switch (f.kind) {
    case NestedTriple::Kind::Leaf:
      if (named && f.leaf.name.empty()) {
        out.push_back({path, "attribute name must be nonempty"});
      }
      return;
    case NestedTriple::Kind::MapNode:
      if (named && f.name.empty()) {
        out.push_back({path, "map attribute name must be nonempty"});
      }
      validate_fragments(f.children, child_path(path, f.name), out);
      return;
    case NestedTriple::Kind::ListNode:
      if (named && f.name.empty()) {
        out.push_back({path, "list attribute name must be nonempty"});
      }
      if (!f.element) {
        out.push_back({path, "list attribute lacks an element scheme"});
        return;
      }
      validate_fragment(*f.element, child_path(path, f.name) + "[]", false, out);
      return;
  }
}

void validate_fragments(const std::vector<NestedTriple>& fragments, const std::string& path,
                        std::vector<Violation>& out) {
  std::set<std::string> seen;
  for (const auto& f : fragments) {
    if (!seen.insert(f.attr_name()).second) {
      out.push_back({child_path(path, f.attr_name()), "duplicate sibling name"});
    }
    validate_fragment(f, child_path(path, f.attr_name()), true, out);
  }
}

void validate_foreign(const Triple& t, const std::string& path, const Catalog* catalog,
                      std::vector<Violation>& out) {
  if (t.constraint.kind != Constraint::Kind::Foreign || !t.constraint.target) return;
  if (!catalog) return;
  const AttrTarget& target = *t.constraint.target;
  const CatalogEntry* entry = catalog->find(target.object);
  if (!entry) {
    out.push_back({path, "FOREIGN target object " + target.object + " not in catalog"});
    return;
  }
  if (!entry->scheme) {
    out.push_back({path, "FOREIGN target object " + target.object + " is uninitialized"});
    return;
  }
  auto type = scheme_attr_type(*entry->scheme, {target.attribute});
  if (!type) {
    out.push_back({path, "FOREIGN target attribute " + target.object + "." + target.attribute +
                             " does not exist"});
    return;
  }
  if (!(*type == t.type) && type->kind != TypeTag::Kind::Any &&
      t.type.kind != TypeTag::Kind::Any) {
    out.push_back({path, "FOREIGN target type differs from declared type"});
  }
}

void collect_triples(const std::vector<NestedTriple>& fragments, const std::string& path,
                     std::vector<std::pair<std::string, const Triple*>>& out) {
  for (const auto& f : fragments) {
    switch (f.kind) {
      case NestedTriple::Kind::Leaf:
        out.emplace_back(child_path(path, f.leaf.name), &f.leaf);
        break;
      case NestedTriple::Kind::MapNode:
        collect_triples(f.children, child_path(path, f.name), out);
        break;
      case NestedTriple::Kind::ListNode:
        if (f.element) {
          std::vector<NestedTriple> one{*f.element};
          collect_triples(one, child_path(path, f.name) + "[]", out);
        }
        break;
    }
  }
}

}  // namespace

std::vector<Violation> validate_scheme(const ObjectScheme& scheme, const Catalog* catalog) {
  std::vector<Violation> out;
  std::vector<std::pair<std::string, const Triple*>> triples;

  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    std::set<std::string> names;
    int primaries = 0;
    for (const auto& c : rel->columns) {
      if (c.name.empty()) out.push_back({"", "column name must be nonempty"});
      if (!names.insert(c.name).second) out.push_back({c.name, "duplicate column name"});
      if (c.constraint.kind == Constraint::Kind::Primary) ++primaries;
      triples.emplace_back(c.name, &c);
    }
    if (primaries > 1) out.push_back({"", "more than one PRIMARY column"});
  } else if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    if (kv->key.constraint.kind != Constraint::Kind::Primary) {
      out.push_back({kv->key.name, "key triple must be PRIMARY"});
    }
    if (kv->key.name.empty() || kv->value.name.empty()) {
      out.push_back({"", "key and value names must be nonempty"});
    }
    if (kv->key.name == kv->value.name) {
      out.push_back({kv->key.name, "key and value names must differ"});
    }
    triples.emplace_back(kv->key.name, &kv->key);
    triples.emplace_back(kv->value.name, &kv->value);
  } else if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    validate_fragments(doc->root, "", out);
    collect_triples(doc->root, "", triples);
  } else {
    const auto& graph = std::get<GraphScheme>(scheme);
    std::set<std::string> names;
    for (const auto& n : graph.nodes) {
      if (!names.insert(n.name).second) out.push_back({n.name, "duplicate scheme name"});
      validate_fragments(n.properties, n.name, out);
      int primaries = 0;
      for (const auto& p : n.properties) {
        if (p.kind == NestedTriple::Kind::Leaf &&
            p.leaf.constraint.kind == Constraint::Kind::Primary) {
          ++primaries;
        }
      }
      if (primaries != 1) {
        out.push_back({n.name, "node scheme must declare exactly one PRIMARY leaf"});
      }
      collect_triples(n.properties, n.name, triples);
    }
    for (const auto& e : graph.edges) {
      if (!names.insert(e.name).second) out.push_back({e.name, "duplicate scheme name"});
      validate_fragments(e.properties, e.name, out);
      if (!graph.node(e.from_scheme)) {
        out.push_back({e.name, "FROM names undeclared node scheme " + e.from_scheme});
      }
      if (!graph.node(e.to_scheme)) {
        out.push_back({e.name, "TO names undeclared node scheme " + e.to_scheme});
      }
      collect_triples(e.properties, e.name, triples);
    }
  }

  for (const auto& [path, triple] : triples) {
    validate_foreign(*triple, path, catalog, out);
  }
  return out;
}

}  // namespace msql
