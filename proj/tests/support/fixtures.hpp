#pragma once

// The running example data set: a Person table, a Blog document store, a
// Cache KV store, a social graph, and the R1/R2 grade tables.

#include <string>

#include "msql/engine.hpp"
#include "msql/parser.hpp"

namespace msql::test {

inline const char* fixture_ddl() {
  return R"(
CREATE RELATION Person;
INIT RELATION Person WITH (id, STRING, PRIMARY), (name, STRING, ), (age, INT, );
CREATE DOCUMENT Blog;
INIT DOCUMENT Blog WITH {(id, STRING, PRIMARY), (title, STRING, ), (content, STRING, ),
  (person, STRING, ), keyword: LIST OF {(kid, INT, ), (kname, STRING, )}};
CREATE KV Cache;
INIT KV Cache WITH {(id, STRING, PRIMARY), (info, STRING, )};
CREATE GRAPH G;
INIT GRAPH G WITH
  NODE Person {(id, STRING, PRIMARY), (name, STRING, )},
  EDGE Relation {FROM: Person, TO: Person, (type, STRING, )};
)";
}

inline const char* fixture_r1_r2() {
  return R"(
CREATE RELATION R1;
INIT RELATION R1 WITH (studentid, string, PRIMARY), (name, string,), (class, int,);
CREATE RELATION R2;
INIT RELATION R2 WITH (id, string, PRIMARY), (studentid, string, FOREIGN),
  (courseid, string, FOREIGN), (grade, int,);
INSERT R1 MULTIVAL ("S1", "Ann", 3), ("S2", "Ben", 2), ("S3", "Cat", 3),
  ("S4", "Dee", 3), ("S5", "Eli", 1);
INSERT R2 MULTIVAL ("G1", "S1", "C1", 85), ("G2", "S2", "C1", 91), ("G3", "S3", "C1", 78),
  ("G4", "S4", "C2", 95), ("G5", "S1", "C2", 88), ("G6", "S5", "C1", 70),
  ("G7", "S3", "C2", 82);
)";
}

inline const char* fixture_data() {
  return R"(
INSERT Person MULTIVAL ("P1", "Amy", 20), ("P2", "Bob", 26), ("P3", "Carol", 31),
  ("P4", "Dan", 24), ("P5", "Eve", 29);
INSERT Blog MULTIVAL
  {id: "BN0024", title: "Graph stores", content: "c1", person: "P1",
   keyword: [{kid: 1, kname: "db"}, {kid: 9, kname: "graphs"}]},
  {id: "BN0025", title: "Learning", content: "c2", person: "P1",
   keyword: [{kid: 3, kname: "ml"}]},
  {id: "BN0026", title: "Joins", content: "c3", person: "P2",
   keyword: [{kid: 1, kname: "db"}, {kid: 2, kname: "sql"}]},
  {id: "BN0027", title: "Empty", content: "c4", person: "P3", keyword: []},
  {id: "BN0028", title: "Paths", content: "c5", person: "P2",
   keyword: [{kid: 5, kname: "nets"}]},
  {id: "BN0029", title: "Values", content: "c6", person: "P5",
   keyword: [{kid: 2, kname: "sql"}]};
INSERT Cache MULTIVAL ("P1", "amy cached profile"), ("P2", "bob cached profile"),
  ("P3", "carol cached profile");
INSERT G.Person MULTIVAL {id: "P1", name: "Amy"}, {id: "P2", name: "Bob"},
  {id: "P3", name: "Carol"}, {id: "P4", name: "Dan"}, {id: "P5", name: "Eve"},
  {id: "P6", name: "Frank"};
INSERT G.Relation MULTIVAL
  {FROM: "P1", TO: "P2", type: "like"},
  {FROM: "P1", TO: "P3", type: "like"},
  {FROM: "P2", TO: "P3", type: "like"},
  {FROM: "P3", TO: "P4", type: "like"},
  {FROM: "P4", TO: "P1", type: "like"},
  {FROM: "P5", TO: "P2", type: "like"},
  {FROM: "P6", TO: "P5", type: "like"},
  {FROM: "P2", TO: "P1", type: "like"},
  {FROM: "P1", TO: "P6", type: "follow"};
)";
}

inline void run_all(Database& db, const std::string& script) {
  for (const auto& stmt : parse_script(script)) db.run(stmt);
}

inline void load_fixture(Database& db) {
  run_all(db, fixture_ddl());
  run_all(db, fixture_r1_r2());
  run_all(db, fixture_data());
}

}  // namespace msql::test
