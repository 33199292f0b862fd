#pragma once

#include <string>

#include "msql/ast.hpp"

namespace msql {

/// Canonical text: uppercase keywords, single spaces, explicit braces in
/// patterns, "->"/"<-" arrows, no trailing ';'. parse_statement of the
/// result is structurally equal to the input.
std::string print_statement(const Statement& stmt);

std::string print_query(const QueryStmt& query);
std::string print_filter(const FilterExpr& filter);
std::string print_pattern(const MatchPattern& pattern);
std::string print_scheme(const ObjectScheme& scheme);
std::string print_type_tag(const TypeTag& tag);
std::string print_attribution(const NestedAttribution& attr);

}  // namespace msql
