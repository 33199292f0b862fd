// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion pins its sample sizes and tolerances in code.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msql/engine.hpp"
#include "msql/parser.hpp"
#include "msql/printer.hpp"
#include "msql/session.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/query_gen.hpp"

using namespace msql;
using namespace msql::test;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::printf("%s criterion-%d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_any_order(std::vector<Value> a, std::vector<Value> b) {
  if (a.size() != b.size()) return false;
  auto less = [](const Value& l, const Value& r) {
    return compare_values(l, r) == Ordering::Less;
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

// -- criterion 1: the worked examples ----------------------------------------

void criterion_worked_examples() {
  auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  try {
    Database db;
    load_fixture(db);

    // (a) the grade query, verbatim text, checked against a hand-computed
    // table: class-3 students S3/S1/S4 with first-match grades 78/85/95.
    ResultSet grades = db.query(std::get<QueryStmt>(parse_statement(
        "SELECT R2.id, R1.studentid, R2.grade FROM\n"
        "JOIN R1, R2\n"
        "RULE R2.id, R1.studentid, R1.class, R2.grade\n"
        "WITH R1.studentid = R2.studentid WHERE\n"
        "R1.class = 3 ORDER BY R2.grade;")));
    const auto& rows = grades.outputs.at(0).items;
    auto row_is = [&](std::size_t i, const char* id, const char* sid, int g) {
      return rows.at(i).find("id")->as_str() == id &&
             rows.at(i).find("studentid")->as_str() == sid &&
             rows.at(i).find("grade")->as_int() == g;
    };
    if (rows.size() != 3 || !row_is(0, "G3", "S3", 78) || !row_is(1, "G1", "S1", 85) ||
        !row_is(2, "G4", "S4", 95)) {
      ok = false;
      detail += "grade query mismatch; ";
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i - 1].find("grade")->as_int() > rows[i].find("grade")->as_int()) {
        ok = false;
        detail += "grade order violated; ";
      }
    }

    // (b) the BN0024 structural match, in the legacy pattern spelling.
    ResultSet matched = db.query(std::get<QueryStmt>(parse_statement(
        "SELECT Blog FROM Blog WHERE "
        "MATCH Blog {id:={, \"BN0024\"}, keyword: list<{kid:{in, [01,02]}}>}")));
    const auto& docs = matched.outputs.at(0).items;
    if (docs.size() != 1 || docs[0].find("id")->as_str() != "BN0024") {
      ok = false;
      detail += "BN0024 match mismatch; ";
    }

    // (c) both Amy path queries, verbatim filters; the arrow flip must
    // change the answer. Hand-verified: forward reaches {P1,P3,P4} in 3
    // bindings, reversed reaches {P1,P2,P5} in 4 bindings.
    ResultSet forward = db.query(std::get<QueryStmt>(parse_statement(
        "SELECT G FROM G WHERE "
        "Person:{name:={, \"Amy\"}} -> Relation:{type:={, \"like\"}} -> Person:{ } "
        "-> Relation:{type:={, \"like\"}} -> Person:{ }")));
    ResultSet reversed = db.query(std::get<QueryStmt>(parse_statement(
        "SELECT G FROM G WHERE "
        "Person:{name:={, \"Amy\"}} -> Relation:{type:={, \"like\"}} -> Person:{ } "
        "<- Relation:{type:={, \"like\"}} <- Person:{ }")));
    auto endpoints = [](const ResultSet& rs) {
      std::set<std::string> out;
      for (const auto& item : rs.outputs.at(0).items) {
        out.insert(item.find("n2")->find("id")->as_str());
      }
      return out;
    };
    std::set<std::string> fwd = endpoints(forward);
    std::set<std::string> rev = endpoints(reversed);
    if (forward.outputs.at(0).items.size() != 3 ||
        fwd != std::set<std::string>{"P1", "P3", "P4"}) {
      ok = false;
      detail += "forward path mismatch; ";
    }
    if (reversed.outputs.at(0).items.size() != 4 ||
        rev != std::set<std::string>{"P1", "P2", "P5"}) {
      ok = false;
      detail += "reversed path mismatch; ";
    }
    if (fwd == rev) {
      ok = false;
      detail += "paths must differ; ";
    }

    // (d) the document join nests a blogs list per person.
    ResultSet joined = db.query(std::get<QueryStmt>(parse_statement(
        "JOIN Person, Blog RULE {Person.id, blogs :\n"
        "[ {Blog.keyword, Blog.content} ] }\n"
        "WITH Person.id = Blog.person")));
    const auto& people = joined.outputs.at(0).items;
    if (people.size() != 4 || people[0].find("id")->as_str() != "P1" ||
        !people[0].find("blogs")->is_list() ||
        people[0].find("blogs")->elements().size() != 2 ||
        !people[0].find("blogs")->elements()[0].has_key("keyword")) {
      ok = false;
      detail += "document join mismatch; ";
    }
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string("threw: ") + e.what();
  }
  double elapsed = seconds_since(start);
  if (elapsed >= 1.0) {
    ok = false;
    detail += "runtime " + std::to_string(elapsed) + "s >= 1s; ";
  }
  report(1, "worked example suite (grade query, BN0024, both Amy paths, document join)", ok,
         detail);
}

// -- criterion 2: parser round trip --------------------------------------------

void criterion_roundtrip() {
  Rng rng(424242);
  int failures_here = 0;
  const int rounds = 10000;
  for (int i = 0; i < rounds; ++i) {
    Statement stmt = random_statement(rng);
    try {
      if (!(parse_statement(print_statement(stmt)) == stmt)) ++failures_here;
    } catch (const std::exception&) {
      ++failures_here;
    }
  }
  report(2, "parse(print(s)) = s on " + std::to_string(rounds) + " random statements",
         failures_here == 0,
         failures_here ? std::to_string(failures_here) + " failures" : "");
}

// -- criterion 3: join oracle ----------------------------------------------------

ItemsWithShape random_store_side(Rng& rng, const std::string& alias) {
  // One side drawn from a real store of a random model; all models share
  // attribute names a/b/c (the KV side lacks b, exercising Null join keys).
  Database db;
  int model = rng.below(3);
  if (model == 0) {
    RelationalScheme rel;
    rel.columns = {Triple{"a", TypeTag::of(TypeTag::Kind::Int), Constraint::none()},
                   Triple{"b", TypeTag::of(TypeTag::Kind::Int), Constraint::none()},
                   Triple{"c", TypeTag::of(TypeTag::Kind::String), Constraint::none()}};
    db.catalog().create(ModelType::Relation, "S");
    db.catalog().init("S", rel);
    db.stores().create("S", ModelType::Relation, rel);
  } else if (model == 1) {
    DocumentScheme doc;
    doc.root = {
        NestedTriple::make_leaf({"a", TypeTag::of(TypeTag::Kind::Int), Constraint::none()}),
        NestedTriple::make_leaf({"b", TypeTag::of(TypeTag::Kind::Int), Constraint::none()}),
        NestedTriple::make_leaf({"c", TypeTag::of(TypeTag::Kind::String), Constraint::none()})};
    db.catalog().create(ModelType::Document, "S");
    db.catalog().init("S", doc);
    db.stores().create("S", ModelType::Document, doc);
  } else {
    KeyValueScheme kv;
    kv.key = {"a", TypeTag::of(TypeTag::Kind::Int), Constraint::primary()};
    kv.value = {"c", TypeTag::of(TypeTag::Kind::String), Constraint::none()};
    db.catalog().create(ModelType::KeyValue, "S");
    db.catalog().init("S", kv);
    db.stores().create("S", ModelType::KeyValue, kv);
  }
  int count = rng.below(21);
  for (int i = 0; i < count; ++i) {
    Value item = Value::map();
    if (model == 2) {
      item.set("a", Value::integer(i));
      item.set("c", Value::str(std::string(1, static_cast<char>('x' + rng.below(3)))));
    } else {
      item.set("a", rng.chance(0.15) ? Value::null() : Value::integer(rng.range(0, 4)));
      item.set("b", Value::integer(rng.range(0, 2)));
      item.set("c", Value::str(std::string(1, static_cast<char>('x' + rng.below(3)))));
    }
    try {
      db.stores().insert_items("S", "", {item});
    } catch (const Error&) {
    }
  }
  ItemsWithShape out;
  out.shape.addressing = ShapeInfo::Addressing::Direct;
  out.shape.direct_alias = alias;
  out.shape.aliases = {alias};
  for (auto& [ref, item] : db.stores().scan("S")) out.items.push_back(std::move(item));
  return out;
}

void criterion_join_oracle() {
  auto start = std::chrono::steady_clock::now();
  Rng rng(535353);
  static const std::vector<JoinKind> kinds = {JoinKind::OneToOne, JoinKind::OneToMany,
                                              JoinKind::Left, JoinKind::Right};
  int disagreements = 0;
  const int rounds = 1000;
  for (int round = 0; round < rounds; ++round) {
    ItemsWithShape left = random_store_side(rng, "L");
    ItemsWithShape right = random_store_side(rng, "R");

    AttributionList rule;
    int form = rng.below(3);
    if (form == 0) {
      rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "a"})));
      rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "c"})));
      rule.attrs.push_back(NestedAttribution::attr(AttrPath({"R", "b"})));
    } else if (form == 1) {
      rule.braced = true;
      rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "c"})));
      rule.attrs.push_back(NestedAttribution::list_out(
          "many", {NestedAttribution::map_out(
                      "", {NestedAttribution::attr(AttrPath({"R", "a"})),
                           NestedAttribution::attr(AttrPath({"R", "c"}))})}));
    } else {
      rule.attrs.push_back(NestedAttribution::attr(AttrPath({"L", "b"})));
      rule.attrs.push_back(
          NestedAttribution::list_out("xs", {NestedAttribution::attr(AttrPath({"R", "a"}))}));
    }
    std::vector<WithCond> with;
    static const std::vector<CmpOp> ops = {CmpOp::Eq, CmpOp::Eq, CmpOp::Lt, CmpOp::Ge};
    static const std::vector<std::string> attrs = {"a", "b", "c"};
    int conds = rng.range(1, 2);
    for (int i = 0; i < conds; ++i) {
      with.push_back(WithCond{AttrPath({"L", rng.pick(attrs)}), rng.pick(ops),
                              AttrPath({"R", rng.pick(attrs)})});
    }
    JoinKind kind = rng.pick(kinds);
    auto mine = join_items(kind, rule, with, left, right, rng.chance(0.5), rng.chance(0.5));
    auto expected = oracle_join(kind, rule, with, OracleSide{"L", left.items},
                                OracleSide{"R", right.items});
    if (mine.size() != expected.size()) {
      ++disagreements;
      continue;
    }
    for (std::size_t i = 0; i < mine.size(); ++i) {
      if (!(mine[i] == expected[i])) {
        ++disagreements;
        break;
      }
    }
  }
  double elapsed = seconds_since(start);
  bool ok = disagreements == 0 && elapsed < 30.0;
  report(3,
         "all four join kinds equal the nested-loop oracle on " + std::to_string(rounds) +
             " mixed-model instances",
         ok,
         disagreements ? std::to_string(disagreements) + " disagreements"
                       : (elapsed >= 30.0 ? "too slow" : ""));
}

// -- criterion 4: match oracle -----------------------------------------------------

void criterion_match_oracle() {
  Rng rng(646464);
  int disagreements = 0;
  const int rounds = 1000;
  for (int i = 0; i < rounds; ++i) {
    MatchPattern pattern = random_pattern(rng, 4);
    Value doc = random_document(rng, 4);
    if (eval_match(pattern, doc) != oracle_match(pattern, doc)) ++disagreements;
  }
  report(4,
         "structural match equals the independent recursive matcher on " +
             std::to_string(rounds) + " pairs",
         disagreements == 0, disagreements ? std::to_string(disagreements) + " disagreements" : "");
}

// -- criterion 5: path oracle --------------------------------------------------------

void criterion_path_oracle() {
  Rng rng(757575);
  int disagreements = 0;
  int reversal_failures = 0;
  const int rounds = 200;
  for (int round = 0; round < rounds; ++round) {
    Database db;
    install_random_graph(db, rng, 8, 16);
    auto steps = random_path_steps(rng, 3);
    std::vector<PathBinding> bindings;
    try {
      bindings = eval_path(steps, db.stores(), "G");
    } catch (const Error&) {
      ++disagreements;
      continue;
    }
    auto expected = oracle_path(steps, oracle_graph_of(db.stores(), "G"), "G");
    bool same = bindings.size() == expected.size();
    for (std::size_t i = 0; same && i < bindings.size(); ++i) {
      same = bindings[i].refs == expected[i];
    }
    if (!same) {
      ++disagreements;
      continue;
    }

    // Double reversal: flip every arrow and transpose every edge.
    Database flipped;
    {
      const auto& scheme = std::get<GraphScheme>(*db.catalog().get("G").scheme);
      GraphScheme transposed = scheme;
      for (auto& e : transposed.edges) std::swap(e.from_scheme, e.to_scheme);
      flipped.catalog().create(ModelType::Graph, "G");
      flipped.catalog().init("G", transposed);
      flipped.stores().create("G", ModelType::Graph, transposed);
      for (const auto& [ref, item] : db.stores().scan("G")) {
        if (ref.kind != ItemRef::Kind::Node) continue;
        flipped.stores().insert_items("G", ref.scheme, {item});
      }
      for (const auto& [ref, item] : db.stores().scan("G")) {
        if (ref.kind != ItemRef::Kind::Edge) continue;
        Value e = item;
        Value from = *item.find("FROM");
        e.set("FROM", *item.find("TO"));
        e.set("TO", from);
        flipped.stores().insert_items("G", ref.scheme, {e});
      }
    }
    auto reversed_steps = steps;
    for (auto& s : reversed_steps) {
      if (s.is_edge) {
        s.direction = s.direction == PathDirection::Forward ? PathDirection::Backward
                                                            : PathDirection::Forward;
      }
    }
    auto flipped_bindings = eval_path(reversed_steps, flipped.stores(), "G");
    bool invariant = flipped_bindings.size() == bindings.size();
    for (std::size_t i = 0; invariant && i < bindings.size(); ++i) {
      const auto& a = bindings[i].refs;
      const auto& b = flipped_bindings[i].refs;
      invariant = a.size() == b.size();
      for (std::size_t j = 0; invariant && j < a.size(); ++j) {
        invariant = a[j].kind == b[j].kind && a[j].scheme == b[j].scheme &&
                    (a[j].kind == ItemRef::Kind::Node ? a[j].key == b[j].key
                                                      : a[j].ordinal == b[j].ordinal);
      }
    }
    if (!invariant) ++reversal_failures;
  }
  bool ok = disagreements == 0 && reversal_failures == 0;
  std::string detail;
  if (disagreements) detail += std::to_string(disagreements) + " oracle disagreements; ";
  if (reversal_failures) detail += std::to_string(reversal_failures) + " reversal failures";
  report(5,
         "path bindings equal exhaustive enumeration on " + std::to_string(rounds) +
             " random graphs, double-reversal invariant holds",
         ok, detail);
}

// -- criterion 6: plan equivalence ------------------------------------------------------

void criterion_plan_equivalence() {
  Rng rng(868686);
  Database db;
  load_fixture(db);
  int disagreements = 0;
  const int rounds = 1000;
  for (int round = 0; round < rounds; ++round) {
    std::string text = random_fixture_query(rng);
    QueryStmt q;
    try {
      q = std::get<QueryStmt>(parse_statement(text));
      ResultSet fast = db.query(q, true);
      ResultSet slow = db.query(q, false);
      bool ordered = std::holds_alternative<SelectStmt>(q.node) &&
                     !std::get<SelectStmt>(q.node).order.empty();
      bool same = fast.outputs.size() == slow.outputs.size();
      for (std::size_t i = 0; same && i < fast.outputs.size(); ++i) {
        if (ordered) {
          same = fast.outputs[i].items.size() == slow.outputs[i].items.size();
          for (std::size_t j = 0; same && j < fast.outputs[i].items.size(); ++j) {
            same = fast.outputs[i].items[j] == slow.outputs[i].items[j];
          }
        } else {
          same = same_any_order(fast.outputs[i].items, slow.outputs[i].items);
        }
      }
      if (!same) ++disagreements;
    } catch (const std::exception&) {
      ++disagreements;
    }
  }

  // Instrumented lookup selection on a 10,000-pair store.
  Database big;
  big.catalog().create(ModelType::KeyValue, "Big");
  KeyValueScheme kv;
  kv.key = {"k", TypeTag::of(TypeTag::Kind::Int), Constraint::primary()};
  kv.value = {"v", TypeTag::of(TypeTag::Kind::Int), Constraint::none()};
  big.catalog().init("Big", kv);
  big.stores().create("Big", ModelType::KeyValue, kv);
  {
    std::vector<Value> pairs;
    pairs.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
      Value item = Value::map();
      item.set("k", Value::integer(i));
      item.set("v", Value::integer(i * 7));
      pairs.push_back(std::move(item));
    }
    big.stores().insert_items("Big", "", pairs);
  }
  QueryStmt lookup =
      std::get<QueryStmt>(parse_statement("SELECT Big FROM Big WHERE Big.k = 4321"));
  big.stores().reset_visit_counts();
  ResultSet fast = big.query(lookup, true);
  std::size_t fast_visits = big.stores().visit_count("Big");
  big.stores().reset_visit_counts();
  ResultSet slow = big.query(lookup, false);
  std::size_t slow_visits = big.stores().visit_count("Big");
  bool instr_ok = fast_visits <= 1 && slow_visits == 10000 &&
                  same_any_order(fast.outputs.at(0).items, slow.outputs.at(0).items);

  bool ok = disagreements == 0 && instr_ok;
  std::string detail;
  if (disagreements) detail += std::to_string(disagreements) + " result mismatches; ";
  if (!instr_ok) {
    detail += "visit counts: optimized " + std::to_string(fast_visits) + ", naive " +
              std::to_string(slow_visits);
  }
  report(6,
         "optimized and naive plans agree on " + std::to_string(rounds) +
             " random queries; KV lookup touches <= 1 of 10000 items",
         ok, detail);
}

// -- criterion 7: transfer ------------------------------------------------------------

void criterion_transfer() {
  Rng rng(979797);
  bool ok = true;
  std::string detail;
  for (int round = 0; round < 25 && ok; ++round) {
    Database db;
    run_all(db,
            "CREATE RELATION T; INIT RELATION T WITH (id, STRING, PRIMARY), (a, INT, ), "
            "(b, STRING, );"
            "CREATE DOCUMENT TD; INIT DOCUMENT TD WITH {(id, STRING, PRIMARY), (a, INT, ), "
            "(b, STRING, )};"
            "CREATE RELATION TBack; INIT RELATION TBack WITH (id, STRING, PRIMARY), "
            "(a, INT, ), (b, STRING, );");
    int rows = rng.range(0, 100);
    std::vector<Value> originals;
    for (int i = 0; i < rows; ++i) {
      Value v = Value::map();
      v.set("id", Value::str("k" + std::to_string(i)));
      v.set("a", rng.chance(0.1) ? Value::null() : Value::integer(rng.range(-99, 99)));
      v.set("b", Value::str(std::string(1, static_cast<char>('a' + rng.below(9)))));
      originals.push_back(v);
      db.stores().insert_items("T", "", {v});
    }
    db.execute_transfer(std::get<TransferStmt>(
        parse_statement("TRANSFER T INTO TD WITH T.id : TD.id, T.a : TD.a, T.b : TD.b")));
    db.execute_transfer(std::get<TransferStmt>(parse_statement(
        "TRANSFER TD INTO TBack WITH TD.id : TBack.id, TD.a : TBack.a, TD.b : TBack.b")));
    std::vector<Value> recovered;
    for (auto& [ref, item] : db.stores().scan("TBack")) recovered.push_back(item);
    if (!same_any_order(recovered, originals)) {
      ok = false;
      detail = "round trip lost rows";
    }
  }

  // Every narrowing STRING -> INT pair must be refused.
  {
    Database db;
    run_all(db,
            "CREATE RELATION S; INIT RELATION S WITH (id, STRING, PRIMARY), (x, STRING, );"
            "CREATE RELATION D; INIT RELATION D WITH (id, STRING, PRIMARY), (x, INT, );");
    const auto& src = *db.catalog().get("S").scheme;
    const auto& dst = *db.catalog().get("D").scheme;
    std::vector<CoRelPair> narrowing = {
        {AttrPath({"S", "id"}), AttrPath({"D", "id"})},
        {AttrPath({"S", "x"}), AttrPath({"D", "x"})},
    };
    if (check_transfer_legality(src, dst, narrowing).empty()) {
      ok = false;
      detail += "; STRING->INT accepted";
    }
  }
  report(7, "relation -> document -> relation identity round trip; narrowing rejected", ok,
         detail);
}

// -- criterion 8: three-valued logic ------------------------------------------------------

void criterion_tribool() {
  const std::vector<TriBool> all = {TriBool::False, TriBool::Unknown, TriBool::True};
  bool ok = true;
  for (TriBool a : all) {
    for (TriBool b : all) {
      TriBool expect_and = (a == TriBool::False || b == TriBool::False) ? TriBool::False
                           : (a == TriBool::True && b == TriBool::True) ? TriBool::True
                                                                        : TriBool::Unknown;
      TriBool expect_or = (a == TriBool::True || b == TriBool::True) ? TriBool::True
                          : (a == TriBool::False && b == TriBool::False) ? TriBool::False
                                                                         : TriBool::Unknown;
      TriBool expect_xor = (a == TriBool::Unknown || b == TriBool::Unknown)
                               ? TriBool::Unknown
                               : tri_of(a != b);
      if (tri_and(a, b) != expect_and || tri_or(a, b) != expect_or ||
          tri_xor(a, b) != expect_xor) {
        ok = false;
      }
    }
    TriBool expect_not = a == TriBool::Unknown ? TriBool::Unknown
                         : a == TriBool::True  ? TriBool::False
                                               : TriBool::True;
    if (tri_not(a) != expect_not) ok = false;
  }

  // De Morgan on random basic filters over random documents.
  Rng rng(108108);
  int checked = 0;
  auto random_cmp = [&]() {
    while (true) {
      FilterExpr f = random_filter(rng, 0);
      if (std::holds_alternative<CmpFilter>(f.node)) return f;
    }
  };
  for (int round = 0; round < 2000; ++round) {
    FilterExpr a = random_cmp();
    FilterExpr b = random_cmp();
    Value item = random_document(rng, 2);
    auto resolve = [&](const AttrPath& path) -> std::optional<Value> {
      const Value* v = &item;
      for (std::size_t i = 1; i < path.segments.size(); ++i) {
        if (!v->is_map()) return std::nullopt;
        v = v->find(path.segments[i]);
        if (!v) return std::nullopt;
      }
      return *v;
    };
    LogicalFilter conj{LogicalOp::And, {a, b}};
    LogicalFilter not_conj{LogicalOp::Not, {FilterExpr{conj}}};
    LogicalFilter not_a{LogicalOp::Not, {a}};
    LogicalFilter not_b{LogicalOp::Not, {b}};
    LogicalFilter disj{LogicalOp::Or, {FilterExpr{not_a}, FilterExpr{not_b}}};
    if (eval_basic(FilterExpr{not_conj}, resolve) != eval_basic(FilterExpr{disj}, resolve)) {
      ok = false;
    }
    ++checked;
  }
  report(8, "exhaustive three-valued truth tables; De Morgan on random filters",
         ok && checked > 300, checked <= 300 ? "too few basic filters generated" : "");
}

// -- criterion 9: snapshot round trip -------------------------------------------------------

void criterion_snapshots() {
  Rng rng(119119);
  auto dir = std::filesystem::temp_directory_path() / "msql_acceptance";
  std::filesystem::create_directories(dir);
  int failures_here = 0;
  const int rounds = 100;
  for (int round = 0; round < rounds; ++round) {
    Session session;
    load_fixture(session.db());
    int extra = rng.range(0, 20);
    for (int i = 0; i < extra; ++i) {
      try {
        switch (rng.below(3)) {
          case 0: {
            Value row = Value::map();
            row.set("id", Value::str("Z" + std::to_string(rng.below(100000))));
            row.set("name", Value::str(ident_pool(rng)));
            row.set("age", rng.chance(0.2) ? Value::null() : Value::integer(rng.range(1, 99)));
            session.db().stores().insert_items("Person", "", {row});
            break;
          }
          case 1: {
            Value pair = Value::map();
            pair.set("id", Value::str("K" + std::to_string(rng.below(100000))));
            pair.set("info", Value::str("x"));
            session.db().stores().insert_items("Cache", "", {pair});
            break;
          }
          default: {
            Value edge = Value::map();
            edge.set("FROM", Value::str("P" + std::to_string(rng.range(1, 6))));
            edge.set("TO", Value::str("P" + std::to_string(rng.range(1, 6))));
            edge.set("type", Value::str(rng.chance(0.5) ? "like" : "follow"));
            session.db().stores().insert_items("G", "Relation", {edge});
            break;
          }
        }
      } catch (const Error&) {
      }
    }
    auto p1 = (dir / ("a" + std::to_string(round) + ".msql")).string();
    auto p2 = (dir / ("b" + std::to_string(round) + ".msql")).string();
    session.save_snapshot(p1);
    Session restored;
    try {
      restored.load_snapshot(p1);
    } catch (const Error&) {
      ++failures_here;
      continue;
    }
    restored.save_snapshot(p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    std::stringstream s1, s2;
    s1 << f1.rdbuf();
    s2 << f2.rdbuf();
    if (s1.str() != s2.str()) ++failures_here;
  }
  report(9,
         "save -> load -> save is byte-identical on " + std::to_string(rounds) +
             " random sessions",
         failures_here == 0,
         failures_here ? std::to_string(failures_here) + " mismatches" : "");
}

}  // namespace

int main() {
  criterion_worked_examples();
  criterion_roundtrip();
  criterion_join_oracle();
  criterion_match_oracle();
  criterion_path_oracle();
  criterion_plan_equivalence();
  criterion_transfer();
  criterion_tribool();
  criterion_snapshots();
  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
