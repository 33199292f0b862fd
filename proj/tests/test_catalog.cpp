#include <doctest.h>

#include "msql/catalog.hpp"
#include "msql/parser.hpp"

using namespace msql;

namespace {

ObjectScheme person_scheme() {
  RelationalScheme rel;
  rel.columns = {Triple{"id", TypeTag::of(TypeTag::Kind::String), Constraint::primary()},
                 Triple{"name", TypeTag::of(TypeTag::Kind::String), Constraint::none()},
                 Triple{"age", TypeTag::of(TypeTag::Kind::Int), Constraint::none()}};
  return rel;
}

}  // namespace

TEST_CASE("create then init yields an initialized entry") {
  Catalog catalog;
  catalog.create(ModelType::Relation, "Person");
  CHECK(!catalog.get("Person").initialized());
  catalog.init("Person", person_scheme());
  CHECK(catalog.get("Person").initialized());
}

TEST_CASE("init errors") {
  Catalog catalog;
  catalog.create(ModelType::Relation, "Person");

  SUBCASE("model mismatch") {
    GraphScheme graph;
    NodeScheme node;
    node.name = "N";
    node.properties.push_back(NestedTriple::make_leaf(
        Triple{"id", TypeTag::of(TypeTag::Kind::String), Constraint::primary()}));
    graph.nodes.push_back(node);
    CHECK_THROWS_WITH_AS(catalog.init("Person", graph), doctest::Contains("created as"), Error);
  }
  SUBCASE("unknown object") {
    CHECK_THROWS_AS(catalog.init("Ghost", person_scheme()), Error);
  }
  SUBCASE("second init is AlreadyInitialized") {
    catalog.init("Person", person_scheme());
    try {
      catalog.init("Person", person_scheme());
      FAIL("expected AlreadyInitialized");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AlreadyInitialized);
    }
  }
  SUBCASE("invalid scheme is rejected with violations") {
    RelationalScheme bad;
    bad.columns = {Triple{"a", TypeTag::of(TypeTag::Kind::Int), Constraint::primary()},
                   Triple{"a", TypeTag::of(TypeTag::Kind::Int), Constraint::primary()}};
    try {
      catalog.init("Person", bad);
      FAIL("expected SchemeInvalid");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SchemeInvalid);
    }
  }
}

TEST_CASE("duplicate names are rejected across objects and views") {
  Catalog catalog;
  catalog.create(ModelType::Relation, "Person");
  try {
    catalog.create(ModelType::Graph, "Person");
    FAIL("expected DuplicateName");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateName);
  }
}

TEST_CASE("views validate their referenced objects") {
  Catalog catalog;
  catalog.create(ModelType::Relation, "Person");
  catalog.init("Person", person_scheme());

  QueryStmt query = std::get<QueryStmt>(
      parse_statement("SELECT Person.name FROM Person WHERE Person.age > 3"));
  catalog.define_view(ViewType::Single, "V", query);
  CHECK(catalog.find_view("V") != nullptr);

  QueryStmt unknown = std::get<QueryStmt>(parse_statement("SELECT Ghost.a FROM Ghost"));
  CHECK_THROWS_AS(catalog.define_view(ViewType::Multi, "W", unknown), Error);

  QueryStmt two = std::get<QueryStmt>(
      parse_statement("JOIN Person, Person2 RULE Person.id, Person2.id WITH Person.id = Person2.id"));
  catalog.create(ModelType::Relation, "Person2");
  catalog.init("Person2", person_scheme());
  try {
    catalog.define_view(ViewType::Single, "S", two);
    FAIL("expected a SINGLE-view violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemeInvalid);
  }
}
