#include "msql/filters.hpp"

#include <algorithm>

#include "msql/error.hpp"
#include "msql/lexer.hpp"

namespace msql {

TriBool tri_of(bool b) { return b ? TriBool::True : TriBool::False; }

TriBool tri_and(TriBool a, TriBool b) {
  if (a == TriBool::False || b == TriBool::False) return TriBool::False;
  if (a == TriBool::Unknown || b == TriBool::Unknown) return TriBool::Unknown;
  return TriBool::True;
}

TriBool tri_or(TriBool a, TriBool b) {
  if (a == TriBool::True || b == TriBool::True) return TriBool::True;
  if (a == TriBool::Unknown || b == TriBool::Unknown) return TriBool::Unknown;
  return TriBool::False;
}

TriBool tri_not(TriBool a) {
  if (a == TriBool::Unknown) return TriBool::Unknown;
  return a == TriBool::True ? TriBool::False : TriBool::True;
}

TriBool tri_xor(TriBool a, TriBool b) {
  if (a == TriBool::Unknown || b == TriBool::Unknown) return TriBool::Unknown;
  return tri_of(a != b);
}

TriBool eval_cmp(const Value& lhs, CmpOp op, const Value& rhs) {
  if (op == CmpOp::Eq) {
    if (lhs.is_null() && rhs.is_null()) return TriBool::True;  // explicit null test
    if (lhs.is_null() || rhs.is_null()) return TriBool::Unknown;
    return tri_of(compare_values(lhs, rhs) == Ordering::Equal);
  }
  if (lhs.is_null() || rhs.is_null()) return TriBool::Unknown;
  if (op == CmpOp::In) {
    if (!rhs.is_list()) return TriBool::False;
    for (const auto& e : rhs.elements()) {
      if (compare_values(lhs, e) == Ordering::Equal) return TriBool::True;
    }
    return TriBool::False;
  }
  Ordering o = compare_values(lhs, rhs);
  switch (op) {
    case CmpOp::Lt: return tri_of(o == Ordering::Less);
    case CmpOp::Gt: return tri_of(o == Ordering::Greater);
    case CmpOp::Le: return tri_of(o != Ordering::Greater);
    case CmpOp::Ge: return tri_of(o != Ordering::Less);
    default: return TriBool::Unknown;
  }
}

TriBool eval_basic(const FilterExpr& expr, const PathResolver& resolve) {
  if (std::holds_alternative<NullFilter>(expr.node)) return TriBool::True;
  if (const auto* cmp = std::get_if<CmpFilter>(&expr.node)) {
    Value lhs = resolve(cmp->lhs).value_or(Value::null());
    Value rhs = std::holds_alternative<Value>(cmp->rhs)
                    ? std::get<Value>(cmp->rhs)
                    : resolve(std::get<AttrPath>(cmp->rhs)).value_or(Value::null());
    return eval_cmp(lhs, cmp->op, rhs);
  }
  if (const auto* logical = std::get_if<LogicalFilter>(&expr.node)) {
    switch (logical->op) {
      case LogicalOp::Not:
        return tri_not(eval_basic(logical->children.front(), resolve));
      case LogicalOp::And: {
        TriBool acc = TriBool::True;
        for (const auto& c : logical->children) acc = tri_and(acc, eval_basic(c, resolve));
        return acc;
      }
      case LogicalOp::Or: {
        TriBool acc = TriBool::False;
        for (const auto& c : logical->children) acc = tri_or(acc, eval_basic(c, resolve));
        return acc;
      }
      case LogicalOp::Xor: {
        TriBool acc = eval_basic(logical->children.front(), resolve);
        for (std::size_t i = 1; i < logical->children.size(); ++i) {
          acc = tri_xor(acc, eval_basic(logical->children[i], resolve));
        }
        return acc;
      }
    }
  }
  throw Error(ErrorCode::Unsupported, "characteristic filter in a basic-only context");
}

namespace {

bool match_pred(const MatchPred& pred, const Value& v) {
  switch (pred.op) {
    case CmpOp::Eq:
      return compare_values(v, pred.value) == Ordering::Equal;  // = NULL tests null
    case CmpOp::In: {
      if (!pred.value.is_list()) return false;
      for (const auto& e : pred.value.elements()) {
        if (compare_values(v, e) == Ordering::Equal) return true;
      }
      return false;
    }
    default:
      break;
  }
  if (v.is_null() || pred.value.is_null()) return false;  // Null never satisfies orderings
  Ordering o = compare_values(v, pred.value);
  switch (pred.op) {
    case CmpOp::Lt: return o == Ordering::Less;
    case CmpOp::Gt: return o == Ordering::Greater;
    case CmpOp::Le: return o != Ordering::Greater;
    case CmpOp::Ge: return o != Ordering::Less;
    default: return false;
  }
}

}  // namespace

bool eval_match(const MatchPattern& pattern, const Value& item) {
  if (pattern.is_wildcard()) return true;
  if (!item.is_map()) return false;
  for (const auto& [attr, entry] : pattern.entries) {
    const Value* v = item.find(attr);
    if (!v) return false;
    switch (entry.kind) {
      case MatchEntry::Kind::Pred:
        if (!match_pred(entry.pred, *v)) return false;
        break;
      case MatchEntry::Kind::Sub:
        if (!eval_match(*entry.pattern, *v)) return false;
        break;
      case MatchEntry::Kind::List: {
        if (!v->is_list()) return false;
        bool any = false;
        for (const auto& e : v->elements()) {
          if (eval_match(*entry.pattern, e)) {
            any = true;
            break;
          }
        }
        if (!any) return false;
        break;
      }
    }
  }
  return true;
}

namespace {

struct PathContext {
  const StoreSet* stores;
  const ObjectStore* store;
  const GraphScheme* scheme;
  std::string object;
  const std::vector<PathStep>* steps;
  std::vector<PathBinding>* out;
};

void extend_binding(const PathContext& ctx, std::vector<ItemRef>& refs, const Value& node_key,
                    std::size_t step_index) {
  if (step_index >= ctx.steps->size()) {
    ctx.out->push_back(PathBinding{refs});
    return;
  }
  const PathStep& edge_step = (*ctx.steps)[step_index];
  const PathStep& node_step = (*ctx.steps)[step_index + 1];
  const EdgeScheme* edge_scheme = ctx.scheme->edge(edge_step.scheme_name);

  // Forward means the edge leaves the current node; backward means it
  // arrives here from the next node.
  StoreSet::Direction dir = edge_step.direction == PathDirection::Forward
                                ? StoreSet::Direction::Out
                                : StoreSet::Direction::In;
  const std::string& neighbor_scheme = edge_step.direction == PathDirection::Forward
                                           ? edge_scheme->to_scheme
                                           : edge_scheme->from_scheme;
  if (neighbor_scheme != node_step.scheme_name) return;

  for (const auto& [edge_ref, node_ref] :
       ctx.stores->neighbors(ctx.object, node_key, edge_step.scheme_name, dir)) {
    Value edge_value = ctx.stores->fetch(*ctx.store, edge_ref);
    if (!eval_match(edge_step.pattern, edge_value)) continue;
    Value node_value = ctx.stores->fetch(*ctx.store, node_ref);
    if (!eval_match(node_step.pattern, node_value)) continue;
    refs.push_back(edge_ref);
    refs.push_back(node_ref);
    extend_binding(ctx, refs, node_ref.key, step_index + 2);
    refs.pop_back();
    refs.pop_back();
  }
}

}  // namespace

std::vector<PathBinding> eval_path(const std::vector<PathStep>& steps, const StoreSet& stores,
                                   const std::string& object_name) {
  const ObjectStore& store = stores.get(object_name);
  if (store.model != ModelType::Graph) {
    throw Error(ErrorCode::ModelMismatch, object_name + " is not a graph object");
  }
  const auto& scheme = std::get<GraphScheme>(store.scheme);
  for (const auto& step : steps) {
    if (step.is_edge) {
      if (!scheme.edge(step.scheme_name)) {
        throw Error(ErrorCode::UnknownScheme, "unknown edge scheme " + step.scheme_name);
      }
    } else if (!scheme.node(step.scheme_name)) {
      throw Error(ErrorCode::UnknownScheme, "unknown node scheme " + step.scheme_name);
    }
  }

  std::vector<PathBinding> out;
  const PathStep& first = steps.front();
  PathContext ctx{&stores, &store, &scheme, object_name, &steps, &out};
  auto start_nodes = stores.scan(object_name, GraphElementFilter{false, first.scheme_name});
  for (const auto& [ref, item] : start_nodes) {
    if (!eval_match(first.pattern, item)) continue;
    std::vector<ItemRef> refs{ref};
    extend_binding(ctx, refs, ref.key, 1);
  }
  std::sort(out.begin(), out.end(), [](const PathBinding& a, const PathBinding& b) {
    return std::lexicographical_compare(a.refs.begin(), a.refs.end(), b.refs.begin(),
                                        b.refs.end(), item_ref_less);
  });
  return out;
}

FilterFamily::FilterFamily() {
  entries_[{static_cast<int>(ModelType::Document), "MATCH"}] = nullptr;
  entries_[{static_cast<int>(ModelType::Graph), "MATCH"}] = nullptr;
  entries_[{static_cast<int>(ModelType::Graph), "PATH"}] = nullptr;
}

void FilterFamily::register_filter(ModelType model, const std::string& name,
                                   FilterEvaluator evaluator) {
  auto key = std::make_pair(static_cast<int>(model), name);
  if (entries_.count(key)) {
    throw Error(ErrorCode::DuplicateFilterName,
                name + " is already registered for " + model_type_name(model));
  }
  if (is_reserved_keyword(name)) {
    throw Error(ErrorCode::ReservedName, name + " is a reserved keyword");
  }
  entries_[key] = std::move(evaluator);
}

const FilterEvaluator* FilterFamily::find(ModelType model, const std::string& name) const {
  auto it = entries_.find({static_cast<int>(model), name});
  if (it == entries_.end() || !it->second) return nullptr;
  return &it->second;
}

bool FilterFamily::registered(ModelType model, const std::string& name) const {
  return entries_.count({static_cast<int>(model), name}) > 0;
}

}  // namespace msql
