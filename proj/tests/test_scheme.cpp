#include <doctest.h>

#include "msql/catalog.hpp"
#include "msql/parser.hpp"
#include "msql/scheme.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace msql;
using namespace msql::test;

namespace {

Triple t(const std::string& name, TypeTag::Kind kind, Constraint c = Constraint::none()) {
  return Triple{name, TypeTag::of(kind), c};
}

/// Generates a value that usually conforms to the fragment, with occasional
/// deliberate damage, so both outcomes are exercised against the oracle.
Value value_for_fragment(Rng& rng, const NestedTriple& f) {
  switch (f.kind) {
    case NestedTriple::Kind::Leaf: {
      if (rng.chance(0.15)) return Value::null();
      if (rng.chance(0.15)) return random_value(rng, 1);
      switch (f.leaf.type.kind) {
        case TypeTag::Kind::Int: return Value::integer(rng.range(-9, 9));
        case TypeTag::Kind::String: return Value::str("s");
        case TypeTag::Kind::Bool: return Value::boolean(true);
        case TypeTag::Kind::Map: return Value::map();
        case TypeTag::Kind::Any: return random_value(rng, 1);
        case TypeTag::Kind::List: {
          std::vector<Value> elems;
          int n = rng.below(3);
          for (int i = 0; i < n; ++i) {
            NestedTriple leaf = NestedTriple::make_leaf(
                Triple{"e", f.leaf.type.element ? *f.leaf.type.element : TypeTag::of(TypeTag::Kind::Any),
                       Constraint::none()});
            elems.push_back(value_for_fragment(rng, leaf));
          }
          return Value::list(std::move(elems));
        }
      }
      return Value::null();
    }
    case NestedTriple::Kind::MapNode: {
      Value m = Value::map();
      for (const auto& child : f.children) {
        if (rng.chance(0.08)) continue;  // sometimes drop a required key
        m.set(child.attr_name(), value_for_fragment(rng, child));
      }
      if (rng.chance(0.08)) m.set("extra_key", Value::integer(1));
      return m;
    }
    case NestedTriple::Kind::ListNode: {
      if (rng.chance(0.1)) return Value::integer(0);
      std::vector<Value> elems;
      int n = rng.below(3);
      for (int i = 0; i < n; ++i) elems.push_back(value_for_fragment(rng, *f.element));
      return Value::list(std::move(elems));
    }
  }
  return Value::null();
}

}  // namespace

TEST_CASE("conforms leaf examples") {
  CHECK(conforms(Value::str("BN0024"), t("id", TypeTag::Kind::String, Constraint::primary()))
            .empty());
  auto violations =
      conforms(Value::null(), t("name", TypeTag::Kind::String, Constraint::not_null()));
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].path == "name");
}

TEST_CASE("conforms rejects unexpected keys") {
  NestedTriple keyword = NestedTriple::make_map(
      "keyword", {NestedTriple::make_leaf(t("kid", TypeTag::Kind::Int))});
  Value item = Value::map();
  item.set("kid", Value::integer(7));
  item.set("extra", Value::integer(1));
  auto violations = conforms(item, keyword);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].message == "unexpected key extra");
  CHECK(violations[0].path == "keyword.extra");
}

TEST_CASE("conforms agrees with the brute-force checker") {
  Rng rng(4242);
  int conforming = 0;
  for (int round = 0; round < 1500; ++round) {
    NestedTriple fragment = random_fragment(rng, 4, round % 7);
    Value item = rng.chance(0.7) ? value_for_fragment(rng, fragment) : random_value(rng, 4);
    bool mine = conforms(item, fragment).empty();
    bool oracle = oracle_conforms(item, fragment);
    CHECK(mine == oracle);
    if (mine) ++conforming;
  }
  CHECK(conforming > 100);  // the generator must exercise the passing side too
}

TEST_CASE("validate_scheme invariants") {
  RelationalScheme two_primaries;
  two_primaries.columns = {t("a", TypeTag::Kind::Int, Constraint::primary()),
                           t("b", TypeTag::Kind::Int, Constraint::primary())};
  CHECK(!validate_scheme(ObjectScheme{two_primaries}, nullptr).empty());

  GraphScheme dangling;
  NodeScheme person;
  person.name = "Person";
  person.properties.push_back(
      NestedTriple::make_leaf(t("id", TypeTag::Kind::String, Constraint::primary())));
  dangling.nodes.push_back(person);
  EdgeScheme edge;
  edge.name = "Rel";
  edge.from_scheme = "Ghost";
  edge.to_scheme = "Person";
  dangling.edges.push_back(edge);
  CHECK(!validate_scheme(ObjectScheme{dangling}, nullptr).empty());

  // A relational scheme without a PRIMARY column is allowed.
  RelationalScheme no_primary;
  no_primary.columns = {t("a", TypeTag::Kind::Int)};
  CHECK(validate_scheme(ObjectScheme{no_primary}, nullptr).empty());
}

TEST_CASE("R2 with R1 in the catalog validates cleanly") {
  Catalog catalog;
  RelationalScheme r1;
  r1.columns = {t("studentid", TypeTag::Kind::String, Constraint::primary()),
                t("name", TypeTag::Kind::String), t("class", TypeTag::Kind::Int)};
  catalog.create(ModelType::Relation, "R1");
  catalog.init("R1", r1);

  RelationalScheme r2;
  r2.columns = {t("id", TypeTag::Kind::String, Constraint::primary()),
                t("studentid", TypeTag::Kind::String, Constraint::foreign()),
                t("courseid", TypeTag::Kind::String, Constraint::foreign()),
                t("grade", TypeTag::Kind::Int)};
  CHECK(validate_scheme(ObjectScheme{r2}, &catalog).empty());

  // An explicit target is resolved; a bad one is a violation.
  RelationalScheme r2_explicit = r2;
  r2_explicit.columns[1].constraint = Constraint::foreign(AttrTarget{"R1", "studentid"});
  CHECK(validate_scheme(ObjectScheme{r2_explicit}, &catalog).empty());
  r2_explicit.columns[1].constraint = Constraint::foreign(AttrTarget{"R9", "studentid"});
  CHECK(!validate_scheme(ObjectScheme{r2_explicit}, &catalog).empty());
}

TEST_CASE("scheme_attr_type walks nested fragments") {
  DocumentScheme blog;
  blog.root.push_back(NestedTriple::make_leaf(t("id", TypeTag::Kind::String, Constraint::primary())));
  blog.root.push_back(NestedTriple::make_list(
      "keyword", NestedTriple::make_map("", {NestedTriple::make_leaf(t("kid", TypeTag::Kind::Int))})));
  ObjectScheme scheme{blog};
  auto id_type = scheme_attr_type(scheme, {"id"});
  REQUIRE(id_type.has_value());
  CHECK(id_type->kind == TypeTag::Kind::String);
  auto kw_type = scheme_attr_type(scheme, {"keyword"});
  REQUIRE(kw_type.has_value());
  CHECK(kw_type->kind == TypeTag::Kind::List);
  CHECK(!scheme_attr_type(scheme, {"missing"}).has_value());
}
