#pragma once

// Generates queries that are valid against the fixture database, used for
// the optimized-versus-naive plan equivalence property.

#include <string>
#include <vector>

#include "msql/parser.hpp"
#include "support/rng.hpp"

namespace msql::test {

inline std::string random_person_pred(Rng& rng) {
  switch (rng.below(5)) {
    case 0: return "Person.age > " + std::to_string(rng.range(18, 33));
    case 1: return "Person.name = \"Amy\"";
    case 2: return "Person.id IN [\"P1\", \"P3\", \"P5\"]";
    case 3: return "Person.age <= " + std::to_string(rng.range(18, 33));
    default: return "NOT (Person.age = " + std::to_string(rng.range(18, 33)) + ")";
  }
}

inline std::string random_blog_pred(Rng& rng) {
  switch (rng.below(4)) {
    case 0: return "Blog.person = \"P" + std::to_string(rng.range(1, 6)) + "\"";
    case 1: return "MATCH Blog {keyword: LIST OF {kid: {IN, [1, 2, 5]}}}";
    case 2: return "MATCH Blog {id: {=, \"BN0024\"}}";
    default: return "Blog.title > \"J\"";
  }
}

inline std::string random_r_pred(Rng& rng, const std::string& alias) {
  if (alias == "R1") {
    return rng.chance(0.5) ? "R1.class = " + std::to_string(rng.range(1, 3))
                           : "R1.name > \"B\"";
  }
  return rng.chance(0.5) ? "R2.grade >= " + std::to_string(rng.range(70, 95))
                         : "R2.courseid = \"C" + std::to_string(rng.range(1, 2)) + "\"";
}

/// A query valid against load_fixture(), as text.
inline std::string random_fixture_query(Rng& rng) {
  switch (rng.below(7)) {
    case 0: {
      std::string q = "SELECT ";
      if (rng.chance(0.3)) q += "DISTINCT ";
      q += rng.chance(0.5) ? "Person.name, Person.age" : "Person";
      q += " FROM Person";
      if (rng.chance(0.8)) q += " WHERE " + random_person_pred(rng);
      if (rng.chance(0.5)) q += " ORDER BY Person.age" + std::string(rng.chance(0.5) ? " DESC" : "");
      return q;
    }
    case 1: {
      std::string q = "SELECT Blog.id, Blog.title FROM Blog";
      if (rng.chance(0.85)) q += " WHERE " + random_blog_pred(rng);
      if (rng.chance(0.4)) q += " ORDER BY Blog.id ASC";
      return q;
    }
    case 2: {
      // KV equality: the optimized plan must select the lookup primitive.
      std::string key = rng.chance(0.75) ? "P" + std::to_string(rng.range(1, 4)) : "NOPE";
      return "SELECT Cache FROM Cache WHERE Cache.id = \"" + key + "\"";
    }
    case 3: {
      // The grade-query family over R1 and R2.
      std::string kind = rng.chance(0.5) ? "JOIN" : (rng.chance(0.5) ? "OM JOIN" : "LEFT JOIN");
      std::string q = "SELECT R2.id, R1.studentid, R2.grade FROM " + kind +
                      " R1, R2 RULE R2.id, R1.studentid, R1.class, R2.grade "
                      "WITH R1.studentid = R2.studentid";
      if (rng.chance(0.8)) q += " WHERE " + random_r_pred(rng, rng.chance(0.7) ? "R1" : "R2");
      if (rng.chance(0.6)) q += " ORDER BY R2.grade" + std::string(rng.chance(0.3) ? " DESC" : "");
      return q;
    }
    case 4: {
      // Aggregating document join.
      std::string kind = rng.chance(0.6) ? "JOIN" : "LEFT JOIN";
      std::string q = kind +
                      " Person, Blog RULE {Person.id, blogs: [{Blog.id, Blog.title}]} "
                      "WITH Person.id = Blog.person";
      return q;
    }
    case 5: {
      // Multiple selection: parallel output objects, one condition each.
      return "SELECT Person.name & Blog.id FROM Person, Blog WHERE " +
             random_person_pred(rng) + " AND " + random_blog_pred(rng);
    }
    default: {
      // Graph path query.
      std::string pattern = rng.chance(0.5) ? "{name: {=, \"Amy\"}}" : "{}";
      std::string arrow1 = rng.chance(0.5) ? "->" : "<-";
      std::string arrow2 = rng.chance(0.5) ? "->" : "<-";
      std::string edge_pat = rng.chance(0.7) ? "{type: {=, \"like\"}}" : "{}";
      return "SELECT G FROM G WHERE PATH Person: " + pattern + " " + arrow1 + " Relation: " +
             edge_pat + " " + arrow1 + " Person: {} " + arrow2 + " Relation: {} " + arrow2 +
             " Person: {}";
    }
  }
}

}  // namespace msql::test
