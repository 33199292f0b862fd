#include <doctest.h>

#include "msql/engine.hpp"
#include "msql/parser.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace msql;
using namespace msql::test;

namespace {

ShapeInfo direct_shape(const std::string& alias) {
  ShapeInfo shape;
  shape.addressing = ShapeInfo::Addressing::Direct;
  shape.direct_alias = alias;
  shape.aliases = {alias};
  return shape;
}

Value row(std::initializer_list<std::pair<std::string, Value>> entries) {
  Value v = Value::map();
  for (const auto& [k, val] : entries) v.set(k, val);
  return v;
}

/// Random base items for one side: maps over attributes a/b/c with small
/// value domains so joins hit often.
std::vector<Value> random_side_items(Rng& rng, int max_items) {
  std::vector<Value> out;
  int n = rng.below(max_items + 1);
  for (int i = 0; i < n; ++i) {
    Value item = Value::map();
    item.set("a", rng.chance(0.15) ? Value::null() : Value::integer(rng.range(0, 4)));
    item.set("b", Value::integer(rng.range(0, 2)));
    item.set("c", Value::str(std::string(1, static_cast<char>('x' + rng.below(3)))));
    out.push_back(std::move(item));
  }
  return out;
}

AttributionList random_rule(Rng& rng) {
  AttributionList rule;
  int form = rng.below(4);
  if (form == 0) {
    // Flat relational rule.
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "a"})));
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "b"})));
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "c"})));
  } else if (form == 1) {
    // Aggregating document rule.
    rule.braced = true;
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "a"})));
    rule.attrs.push_back(NestedAttribution::list_out(
        "many", {NestedAttribution::map_out(
                    "", {NestedAttribution::attr(AttrPath({"R", "b"})),
                         NestedAttribution::attr(AttrPath({"R", "c"}))})}));
  } else if (form == 2) {
    // Aggregating list of single attributes.
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "c"})));
    rule.attrs.push_back(
        NestedAttribution::list_out("xs", {NestedAttribution::attr(AttrPath({"R", "a"}))}));
  } else {
    // Literal (non-aggregating) nesting over the anchor side only.
    rule.braced = true;
    rule.attrs.push_back(NestedAttribution::map_out(
        "pair", {NestedAttribution::attr(AttrPath({"L", "a"})),
                 NestedAttribution::attr(AttrPath({"L", "b"}))}));
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "c"})));
  }
  return rule;
}

std::vector<WithCond> random_with(Rng& rng) {
  std::vector<WithCond> with;
  static const std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Eq, CmpOp::Eq,
                                         CmpOp::Lt, CmpOp::Le, CmpOp::Ge};
  int n = rng.range(1, 2);
  static const std::vector<std::string> attrs = {"a", "b", "c"};
  for (int i = 0; i < n; ++i) {
    with.push_back(WithCond{AttrPath({"L", rng.pick(attrs)}), rng.pick(ops),
                            AttrPath({"R", rng.pick(attrs)})});
  }
  return with;
}

}  // namespace

TEST_CASE("join kinds against the nested-loop oracle") {
  Rng rng(909090);
  static const std::vector<JoinKind> kinds = {JoinKind::OneToOne, JoinKind::OneToMany,
                                              JoinKind::Left, JoinKind::Right};
  for (int round = 0; round < 400; ++round) {
    ItemsWithShape left{random_side_items(rng, 20), direct_shape("L")};
    ItemsWithShape right{random_side_items(rng, 20), direct_shape("R")};
    AttributionList rule = random_rule(rng);
    std::vector<WithCond> with = random_with(rng);
    JoinKind kind = rng.pick(kinds);
    bool hash = rng.chance(0.5);

    auto mine = join_items(kind, rule, with, left, right, hash, rng.chance(0.5));
    auto expected = oracle_join(kind, rule, with, OracleSide{"L", left.items},
                                OracleSide{"R", right.items});
    REQUIRE(mine.size() == expected.size());
    for (std::size_t i = 0; i < mine.size(); ++i) {
      CHECK(mine[i] == expected[i]);
    }
  }
}

TEST_CASE("one-to-one picks the first match in scan order") {
  ItemsWithShape left{{row({{"k", Value::integer(1)}})}, direct_shape("L")};
  ItemsWithShape right{{row({{"k", Value::integer(1)}, {"v", Value::str("first")}}),
                        row({{"k", Value::integer(1)}, {"v", Value::str("second")}})},
                       direct_shape("R")};
  AttributionList rule;
  rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "k"})));
  rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "v"})));
  std::vector<WithCond> with{{AttrPath({"L", "k"}), CmpOp::Eq, AttrPath({"R", "k"})}};

  auto out = join_items(JoinKind::OneToOne, rule, with, left, right, true, true);
  REQUIRE(out.size() == 1);
  CHECK(*out[0].find("v") == Value::str("first"));

  auto om = join_items(JoinKind::OneToMany, rule, with, left, right, false, true);
  CHECK(om.size() == 2);
}

TEST_CASE("left join pads unmatched anchors with nulls") {
  ItemsWithShape left{{row({{"k", Value::integer(1)}}), row({{"k", Value::integer(2)}})},
                      direct_shape("L")};
  ItemsWithShape right{{}, direct_shape("R")};
  AttributionList rule;
  rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "k"})));
  rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "v"})));
  std::vector<WithCond> with{{AttrPath({"L", "k"}), CmpOp::Eq, AttrPath({"R", "k"})}};

  auto out = join_items(JoinKind::Left, rule, with, left, right, true, true);
  REQUIRE(out.size() == 2);
  CHECK(out[0].find("v")->is_null());

  // With an aggregating rule the padding is an empty list.
  AttributionList agg;
  agg.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "k"})));
  agg.attrs.push_back(
      NestedAttribution::list_out("vs", {NestedAttribution::attr(AttrPath({"R", "v"}))}));
  auto padded = join_items(JoinKind::Left, agg, with, left, right, true, true);
  REQUIRE(padded.size() == 2);
  CHECK(padded[0].find("vs")->is_list());
  CHECK(padded[0].find("vs")->elements().empty());
}

TEST_CASE("join size invariants") {
  Rng rng(111222);
  for (int round = 0; round < 200; ++round) {
    ItemsWithShape left{random_side_items(rng, 12), direct_shape("L")};
    ItemsWithShape right{random_side_items(rng, 12), direct_shape("R")};
    AttributionList rule;
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "a"})));
    rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "b"})));
    std::vector<WithCond> with = random_with(rng);

    CHECK(join_items(JoinKind::OneToOne, rule, with, left, right, true, true).size() <=
          left.items.size());
    // Every left item appears at least once in a LEFT join.
    CHECK(join_items(JoinKind::Left, rule, with, left, right, true, true).size() >=
          left.items.size());
    CHECK(join_items(JoinKind::Right, rule, with, left, right, true, true).size() >=
          right.items.size());

    AttributionList agg;
    agg.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "a"})));
    agg.attrs.push_back(
        NestedAttribution::list_out("xs", {NestedAttribution::attr(AttrPath({"R", "b"}))}));
    std::size_t matched_lefts = 0;
    for (const auto& l : left.items) {
      for (const auto& r : right.items) {
        if (oracle_pair_matches(with, l, r, OracleSide{"L", {}}, OracleSide{"R", {}})) {
          ++matched_lefts;
          break;
        }
      }
    }
    CHECK(join_items(JoinKind::OneToMany, agg, with, left, right, true, true).size() ==
          matched_lefts);
  }
}

TEST_CASE("ambiguous bare column names are rejected") {
  ShapeInfo columns_shape;
  columns_shape.addressing = ShapeInfo::Addressing::Columns;
  columns_shape.columns = {{"k", AttrPath({"L", "k"})}};
  columns_shape.aliases = {"L"};
  ItemsWithShape left{{row({{"k", Value::integer(1)}})}, columns_shape};
  ShapeInfo right_shape = columns_shape;
  right_shape.columns = {{"k", AttrPath({"R", "k"})}};
  right_shape.aliases = {"R"};
  ItemsWithShape right{{row({{"k", Value::integer(1)}})}, right_shape};

  AttributionList rule;
  rule.attrs.push_back(NestedAttribution::attr(AttrPath({"k"})));
  std::vector<WithCond> with{{AttrPath({"L", "k"}), CmpOp::Eq, AttrPath({"R", "k"})}};
  CHECK_THROWS_AS(join_items(JoinKind::OneToOne, rule, with, left, right, false, true), Error);
}
