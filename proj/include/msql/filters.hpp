#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msql/ast.hpp"
#include "msql/storage.hpp"

namespace msql {

/// Three-valued logic for Null-involved comparisons. A WHERE clause admits
/// an item iff its filter evaluates to True.
enum class TriBool { False, Unknown, True };

TriBool tri_and(TriBool a, TriBool b);
TriBool tri_or(TriBool a, TriBool b);
TriBool tri_not(TriBool a);
TriBool tri_xor(TriBool a, TriBool b);  // Unknown if either side is Unknown

TriBool tri_of(bool b);

/// Compares two operands under the Cmp rules: any Null operand gives
/// Unknown, except '=' where Null = Null is True. IN tests list membership
/// by compare_values equality.
TriBool eval_cmp(const Value& lhs, CmpOp op, const Value& rhs);

using PathResolver = std::function<std::optional<Value>(const AttrPath&)>;

/// Evaluates a basic filter (Cmp / Logical / Null nodes only) against an
/// attribute-resolvable item; unresolvable paths become Null operands.
/// Throws Error(Unsupported) on characteristic nodes.
TriBool eval_basic(const FilterExpr& expr, const PathResolver& resolve);

/// Structural subdocument matching. The wildcard pattern {} matches
/// anything; a nonempty pattern requires a map with every listed attribute
/// present and satisfying its entry; list entries match existentially.
bool eval_match(const MatchPattern& pattern, const Value& item);

/// One fixed-length directional pattern binding: node, edge, node, ...
/// refs in step order.
struct PathBinding {
  std::vector<ItemRef> refs;

  bool operator==(const PathBinding& other) const { return refs == other.refs; }
};

/// Enumerates every binding of sigma over the named graph object.
/// Forward edges go step i -> step i+1, backward edges the reverse;
/// repeated nodes and edges within one binding are allowed. Results are
/// lexicographic by ItemRef sequence.
std::vector<PathBinding> eval_path(const std::vector<PathStep>& steps, const StoreSet& stores,
                                   const std::string& object_name);

/// Evaluator for a registered filter: called per item with literal args.
using FilterEvaluator = std::function<TriBool(const Value& item, const std::vector<Value>& args)>;

/// The extensible filter family: basic operators are always available;
/// MATCH (document, graph) and PATH (graph) are preloaded; users register
/// new evaluators per model without touching the grammar.
class FilterFamily {
 public:
  FilterFamily();

  /// Throws DuplicateFilterName or ReservedName.
  void register_filter(ModelType model, const std::string& name, FilterEvaluator evaluator);

  /// nullptr when the name is unregistered for that model. Preloaded MATCH
  /// and PATH report as registered but have no callable evaluator.
  const FilterEvaluator* find(ModelType model, const std::string& name) const;
  bool registered(ModelType model, const std::string& name) const;

 private:
  std::map<std::pair<int, std::string>, FilterEvaluator> entries_;
};

}  // namespace msql
