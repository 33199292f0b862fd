#include <doctest.h>

#include "msql/parser.hpp"
#include "msql/printer.hpp"
#include "msql/value.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace msql;
using namespace msql::test;

TEST_CASE("compare_values scalar basics") {
  CHECK(compare_values(Value::integer(3), Value::integer(5)) == Ordering::Less);
  CHECK(compare_values(Value::null(), Value::null()) == Ordering::Equal);
  CHECK(compare_values(Value::boolean(false), Value::boolean(true)) == Ordering::Less);
  CHECK(compare_values(Value::str("ab"), Value::str("b")) == Ordering::Less);
}

TEST_CASE("cross-kind ordering follows the rank table") {
  // Oracle: one representative per kind, every ordered pair checked against
  // the declared rank Null < Bool < Int < Str < List < Map.
  std::vector<Value> reps = {Value::null(),   Value::boolean(false), Value::integer(99),
                             Value::str("a"), Value::list(),         Value::map()};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = 0; j < reps.size(); ++j) {
      if (i == j) continue;
      Ordering expected = oracle_kind_rank(reps[i]) < oracle_kind_rank(reps[j])
                              ? Ordering::Less
                              : Ordering::Greater;
      CHECK(compare_values(reps[i], reps[j]) == expected);
    }
  }
  CHECK(compare_values(Value::str("a"), Value::integer(99)) == Ordering::Greater);
}

TEST_CASE("lists compare lexicographically, maps by sorted keys") {
  Value a = Value::list({Value::integer(1), Value::integer(2)});
  Value b = Value::list({Value::integer(1), Value::integer(3)});
  CHECK(compare_values(a, b) == Ordering::Less);
  CHECK(compare_values(Value::list({Value::integer(1)}), a) == Ordering::Less);

  Value m1 = Value::map();
  m1.set("b", Value::integer(2));
  m1.set("a", Value::integer(1));
  Value m2 = Value::map();
  m2.set("a", Value::integer(1));
  m2.set("b", Value::integer(2));
  CHECK(m1 == m2);  // insertion order is irrelevant to equality

  Value m3 = m2;
  m3.set("b", Value::integer(9));
  CHECK(compare_values(m2, m3) == Ordering::Less);
}

TEST_CASE("compare_values is a total order on random values") {
  Rng rng(1234);
  for (int round = 0; round < 500; ++round) {
    Value a = random_value(rng, 3);
    Value b = random_value(rng, 3);
    Value c = random_value(rng, 3);
    Ordering ab = compare_values(a, b);
    Ordering ba = compare_values(b, a);
    // Antisymmetry.
    if (ab == Ordering::Less) CHECK(ba == Ordering::Greater);
    if (ab == Ordering::Greater) CHECK(ba == Ordering::Less);
    if (ab == Ordering::Equal) CHECK(ba == Ordering::Equal);
    // Transitivity.
    if (ab != Ordering::Greater && compare_values(b, c) != Ordering::Greater) {
      CHECK(compare_values(a, c) != Ordering::Greater);
    }
  }
}

TEST_CASE("canonical value text") {
  CHECK(print_value(Value::null()) == "NULL");
  CHECK(print_value(Value::boolean(true)) == "TRUE");
  CHECK(print_value(Value::integer(-7)) == "-7");
  CHECK(print_value(Value::str("a\"b\\c")) == "\"a\\\"b\\\\c\"");
  Value m = Value::map();
  m.set("zz", Value::integer(1));
  m.set("aa", Value::list({Value::str("x")}));
  m.set("key with space", Value::null());
  CHECK(print_value(m) == "{aa: [\"x\"], \"key with space\": NULL, zz: 1}");
}

TEST_CASE("printed values reparse to equal values") {
  Rng rng(77);
  for (int round = 0; round < 400; ++round) {
    Value v = random_value(rng, 3);
    std::string text = "INSERT X MULTIVAL " + print_value(v);
    Statement stmt = parse_statement(text);
    const auto& insert = std::get<InsertStmt>(stmt);
    REQUIRE(insert.items.size() == 1);
    CHECK(insert.items[0].value == v);
  }
}
