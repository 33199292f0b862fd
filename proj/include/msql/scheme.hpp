#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "msql/box.hpp"
#include "msql/error.hpp"
#include "msql/value.hpp"

namespace msql {

enum class ModelType { Relation, KeyValue, Document, Graph };

const char* model_type_name(ModelType t);  // "RELATION", "KV", ...

/// Attribute domain. LIST carries its element tag; ANY accepts every value.
struct TypeTag {
  enum class Kind { Int, String, Bool, List, Map, Any };

  Kind kind = Kind::Any;
  Box<TypeTag> element;  // set iff kind == List

  static TypeTag of(Kind k) { return TypeTag{k, {}}; }
  static TypeTag list_of(TypeTag elem) { return TypeTag{Kind::List, Box<TypeTag>(std::move(elem))}; }

  bool operator==(const TypeTag&) const = default;
};

struct AttrTarget {
  std::string object;
  std::string attribute;

  bool operator==(const AttrTarget&) const = default;
};

struct Constraint {
  enum class Kind { None, Primary, Foreign, NotNull };

  Kind kind = Kind::None;
  // Optional explicit FOREIGN target (object.attribute). A bare FOREIGN is
  // a declaration-only marker; only explicit targets are resolved.
  std::optional<AttrTarget> target;

  static Constraint none() { return {}; }
  static Constraint primary() { return {Kind::Primary, std::nullopt}; }
  static Constraint not_null() { return {Kind::NotNull, std::nullopt}; }
  static Constraint foreign(std::optional<AttrTarget> t = std::nullopt) {
    return {Kind::Foreign, std::move(t)};
  }

  bool operator==(const Constraint&) const = default;
};

/// The atomic scheme unit: name, domain, constraint.
struct Triple {
  std::string name;
  TypeTag type;
  Constraint constraint;

  bool operator==(const Triple&) const = default;
};

/// Recursive scheme node for documents and graph element properties.
/// Leaf carries a Triple; MapNode declares a named map attribute with the
/// children as its exact key set; ListNode declares a named list attribute
/// (the name is empty when the node is the element of an enclosing list).
struct NestedTriple {
  enum class Kind { Leaf, MapNode, ListNode };

  Kind kind = Kind::Leaf;
  Triple leaf;                         // Leaf
  std::string name;                    // MapNode / ListNode
  std::vector<NestedTriple> children;  // MapNode
  Box<NestedTriple> element;           // ListNode

  static NestedTriple make_leaf(Triple t) {
    NestedTriple n;
    n.kind = Kind::Leaf;
    n.leaf = std::move(t);
    return n;
  }
  static NestedTriple make_map(std::string name, std::vector<NestedTriple> children) {
    NestedTriple n;
    n.kind = Kind::MapNode;
    n.name = std::move(name);
    n.children = std::move(children);
    return n;
  }
  static NestedTriple make_list(std::string name, NestedTriple element) {
    NestedTriple n;
    n.kind = Kind::ListNode;
    n.name = std::move(name);
    n.element = Box<NestedTriple>(std::move(element));
    return n;
  }

  /// The attribute name this fragment contributes to its enclosing map.
  const std::string& attr_name() const { return kind == Kind::Leaf ? leaf.name : name; }

  bool operator==(const NestedTriple&) const = default;
};

struct RelationalScheme {
  std::vector<Triple> columns;

  const Triple* primary_column() const;
  const Triple* column(const std::string& name) const;

  bool operator==(const RelationalScheme&) const = default;
};

struct KeyValueScheme {
  Triple key;    // constraint must be PRIMARY
  Triple value;

  bool operator==(const KeyValueScheme&) const = default;
};

struct DocumentScheme {
  std::vector<NestedTriple> root;

  bool operator==(const DocumentScheme&) const = default;
};

struct NodeScheme {
  std::string name;
  std::vector<NestedTriple> properties;

  /// The PRIMARY leaf holding node identity; nullptr when absent (invalid).
  const Triple* key_triple() const;

  bool operator==(const NodeScheme&) const = default;
};

struct EdgeScheme {
  std::string name;
  std::string from_scheme;
  std::string to_scheme;
  std::vector<NestedTriple> properties;

  bool operator==(const EdgeScheme&) const = default;
};

struct GraphScheme {
  std::vector<NodeScheme> nodes;
  std::vector<EdgeScheme> edges;

  const NodeScheme* node(const std::string& name) const;
  const EdgeScheme* edge(const std::string& name) const;

  bool operator==(const GraphScheme&) const = default;
};

using ObjectScheme = std::variant<RelationalScheme, KeyValueScheme, DocumentScheme, GraphScheme>;

ModelType scheme_model(const ObjectScheme& scheme);

/// Looks up the TypeTag of a dotted attribute path (without the object root)
/// inside a scheme. Paths descend through MapNode names; a ListNode name
/// yields its list tag. nullopt when the path does not exist.
std::optional<TypeTag> scheme_attr_type(const ObjectScheme& scheme,
                                        const std::vector<std::string>& path);

/// True when `v` inhabits the domain `tag` (Null is handled by the caller).
bool value_matches_tag(const Value& v, const TypeTag& tag);

/// Instance-level check of a single scheme fragment. Returns one violation
/// per failure, each with a dotted path; empty means the item conforms.
std::vector<Violation> conforms(const Value& item, const NestedTriple& fragment);
std::vector<Violation> conforms(const Value& item, const Triple& triple);

/// Checks a whole map-shaped item against a fragment list (document root,
/// node or edge properties): exact key set, each key conforming.
std::vector<Violation> conforms_fragments(const Value& item,
                                          const std::vector<NestedTriple>& fragments);

class Catalog;

/// Enforces every scheme invariant plus explicit FOREIGN target resolution
/// against the catalog (pass nullptr to skip catalog-dependent checks).
std::vector<Violation> validate_scheme(const ObjectScheme& scheme, const Catalog* catalog);

}  // namespace msql
