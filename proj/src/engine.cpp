#include "msql/engine.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "msql/error.hpp"
#include "msql/printer.hpp"

namespace msql {

// ---------------------------------------------------------------------------
// Path resolution against shaped items

std::optional<Value> resolve_in_item(const Value& item, const ShapeInfo& shape,
                                     const AttrPath& path) {
  if (path.empty()) return std::nullopt;
  if (shape.addressing == ShapeInfo::Addressing::Direct) {
    if (path.root() != shape.direct_alias) return std::nullopt;
    const Value* v = &item;
    for (std::size_t i = 1; i < path.segments.size(); ++i) {
      if (!v->is_map()) return std::nullopt;
      v = v->find(path.segments[i]);
      if (!v) return std::nullopt;
    }
    return *v;
  }
  // A self-alias addresses the whole item; stripping it leaves a bare
  // column path.
  if (!shape.self_alias.empty() && path.root() == shape.self_alias) {
    if (path.segments.size() == 1) return item;
    AttrPath rest;
    rest.segments.assign(path.segments.begin() + 1, path.segments.end());
    const Value* v = item.find(rest.segments[0]);
    if (!v) return std::nullopt;
    for (std::size_t i = 1; i < rest.segments.size(); ++i) {
      if (!v->is_map()) return std::nullopt;
      v = v->find(rest.segments[i]);
      if (!v) return std::nullopt;
    }
    return *v;
  }
  // Columns: longest source-path prefix, then walk the remainder.
  const OutputColumn* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& col : shape.columns) {
    const auto& src = col.source.segments;
    if (src.empty() || src.size() > path.segments.size()) continue;
    if (!std::equal(src.begin(), src.end(), path.segments.begin())) continue;
    if (src.size() > best_len) {
      best = &col;
      best_len = src.size();
    }
  }
  if (best) {
    const Value* v = item.find(best->name);
    if (!v) return std::nullopt;
    for (std::size_t i = best_len; i < path.segments.size(); ++i) {
      if (!v->is_map()) return std::nullopt;
      v = v->find(path.segments[i]);
      if (!v) return std::nullopt;
    }
    return *v;
  }
  if (path.segments.size() == 1) {
    // Bare output-column name.
    const OutputColumn* found = nullptr;
    for (const auto& col : shape.columns) {
      if (col.name == path.segments[0]) {
        if (found) {
          throw Error(ErrorCode::AmbiguousAttribute,
                      path.segments[0] + " resolves on more than one output column");
        }
        found = &col;
      }
    }
    if (found) {
      const Value* v = item.find(found->name);
      if (v) return *v;
    }
  }
  return std::nullopt;
}

std::vector<OutputColumn> attribution_columns(const AttributionList& attrs) {
  std::vector<OutputColumn> out;
  for (const auto& a : attrs.attrs) {
    if (a.kind == NestedAttribution::Kind::AttrRef) {
      out.push_back({a.ref.segments.back(), a.ref});
    } else if (!a.name.empty()) {
      out.push_back({a.name, AttrPath{}});
    } else {
      // Anonymous braced shape at the top flattens into its children.
      for (const auto& c : a.children) {
        if (c.kind == NestedAttribution::Kind::AttrRef) {
          out.push_back({c.ref.segments.back(), c.ref});
        } else {
          out.push_back({c.name, AttrPath{}});
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Projection

namespace {

using ResolveFn = std::function<std::optional<Value>(const AttrPath&)>;

Value project_attribution(const NestedAttribution& attr, const ResolveFn& resolve);

Value project_children_map(const std::vector<NestedAttribution>& children,
                           const ResolveFn& resolve) {
  Value out = Value::map();
  for (const auto& c : children) {
    out.set(c.output_key(), project_attribution(c, resolve));
  }
  return out;
}

Value project_attribution(const NestedAttribution& attr, const ResolveFn& resolve) {
  switch (attr.kind) {
    case NestedAttribution::Kind::AttrRef:
      return resolve(attr.ref).value_or(Value::null());
    case NestedAttribution::Kind::MapOut:
      return project_children_map(attr.children, resolve);
    case NestedAttribution::Kind::ListOut: {
      std::vector<Value> elems;
      elems.reserve(attr.children.size());
      for (const auto& c : attr.children) elems.push_back(project_attribution(c, resolve));
      return Value::list(std::move(elems));
    }
  }
  return Value::null();
}

Value project_list(const AttributionList& attrs, const ResolveFn& resolve) {
  if (attrs.attrs.size() == 1 && attrs.attrs[0].kind == NestedAttribution::Kind::MapOut &&
      attrs.attrs[0].name.empty()) {
    return project_children_map(attrs.attrs[0].children, resolve);
  }
  return project_children_map(attrs.attrs, resolve);
}

}  // namespace

Value project_item(const Value& item, const ShapeInfo& shape, const AttributionList& attrs) {
  ResolveFn resolve = [&](const AttrPath& p) { return resolve_in_item(item, shape, p); };
  return project_list(attrs, resolve);
}

// ---------------------------------------------------------------------------
// Joins

namespace {

bool subtree_references(const NestedAttribution& attr, const ShapeInfo& side) {
  if (attr.kind == NestedAttribution::Kind::AttrRef) {
    return side.covers(attr.ref.root());
  }
  for (const auto& c : attr.children) {
    if (subtree_references(c, side)) return true;
  }
  return false;
}

bool has_aggregating_list(const std::vector<NestedAttribution>& attrs, const ShapeInfo& other) {
  for (const auto& a : attrs) {
    if (a.kind == NestedAttribution::Kind::ListOut && subtree_references(a, other)) return true;
    if (!a.children.empty() && has_aggregating_list(a.children, other)) return true;
  }
  return false;
}

struct PairContext {
  const Value* left = nullptr;
  const ShapeInfo* left_shape = nullptr;
  const Value* right = nullptr;
  const ShapeInfo* right_shape = nullptr;

  std::optional<Value> resolve(const AttrPath& path) const {
    const std::string& root = path.root();
    bool on_left = left_shape->covers(root);
    bool on_right = right_shape->covers(root);
    if (!on_left && !on_right && path.segments.size() == 1) {
      // Bare column name: try both sides, rejecting genuine ambiguity.
      std::optional<Value> lv =
          left ? resolve_in_item(*left, *left_shape, path) : std::nullopt;
      std::optional<Value> rv =
          right ? resolve_in_item(*right, *right_shape, path) : std::nullopt;
      if (lv && rv) {
        throw Error(ErrorCode::AmbiguousAttribute,
                    path.dotted() + " resolves on both join sides");
      }
      return lv ? lv : rv;
    }
    if (on_left) return left ? resolve_in_item(*left, *left_shape, path) : std::nullopt;
    if (on_right) return right ? resolve_in_item(*right, *right_shape, path) : std::nullopt;
    return std::nullopt;
  }
};

bool pair_matches(const std::vector<WithCond>& with, const PairContext& ctx) {
  for (const auto& cond : with) {
    Value lhs = ctx.resolve(cond.lhs).value_or(Value::null());
    Value rhs = ctx.resolve(cond.rhs).value_or(Value::null());
    if (eval_cmp(lhs, cond.op, rhs) != TriBool::True) return false;
  }
  return true;
}

/// Builds one aggregated output item: non-anchor refs outside aggregating
/// lists take the first match (Null when unmatched); aggregating lists
/// collect one element per match.
Value project_rule_aggregated(const std::vector<NestedAttribution>& attrs, bool anchor_is_left,
                              const Value& anchor, const ShapeInfo& anchor_shape,
                              const std::vector<const Value*>& matches,
                              const ShapeInfo& other_shape);

Value project_agg_attribution(const NestedAttribution& attr, bool anchor_is_left,
                              const Value& anchor, const ShapeInfo& anchor_shape,
                              const std::vector<const Value*>& matches,
                              const ShapeInfo& other_shape) {
  auto pair_ctx = [&](const Value* other) {
    PairContext ctx;
    if (anchor_is_left) {
      ctx.left = &anchor;
      ctx.left_shape = &anchor_shape;
      ctx.right = other;
      ctx.right_shape = &other_shape;
    } else {
      ctx.right = &anchor;
      ctx.right_shape = &anchor_shape;
      ctx.left = other;
      ctx.left_shape = &other_shape;
    }
    return ctx;
  };

  if (attr.kind == NestedAttribution::Kind::ListOut && subtree_references(attr, other_shape)) {
    std::vector<Value> elems;
    elems.reserve(matches.size());
    for (const Value* m : matches) {
      PairContext ctx = pair_ctx(m);
      ResolveFn resolve = [&](const AttrPath& p) { return ctx.resolve(p); };
      if (attr.children.size() == 1) {
        elems.push_back(project_attribution(attr.children[0], resolve));
      } else {
        elems.push_back(project_children_map(attr.children, resolve));
      }
    }
    return Value::list(std::move(elems));
  }
  if (attr.kind == NestedAttribution::Kind::MapOut) {
    Value out = Value::map();
    for (const auto& c : attr.children) {
      out.set(c.output_key(), project_agg_attribution(c, anchor_is_left, anchor, anchor_shape,
                                                      matches, other_shape));
    }
    return out;
  }
  PairContext ctx = pair_ctx(matches.empty() ? nullptr : matches.front());
  ResolveFn resolve = [&](const AttrPath& p) { return ctx.resolve(p); };
  return project_attribution(attr, resolve);
}

Value project_rule_aggregated(const std::vector<NestedAttribution>& attrs, bool anchor_is_left,
                              const Value& anchor, const ShapeInfo& anchor_shape,
                              const std::vector<const Value*>& matches,
                              const ShapeInfo& other_shape) {
  // A single anonymous brace group is the whole output map.
  if (attrs.size() == 1 && attrs[0].kind == NestedAttribution::Kind::MapOut &&
      attrs[0].name.empty()) {
    return project_agg_attribution(attrs[0], anchor_is_left, anchor, anchor_shape, matches,
                                   other_shape);
  }
  Value out = Value::map();
  for (const auto& a : attrs) {
    out.set(a.output_key(), project_agg_attribution(a, anchor_is_left, anchor, anchor_shape,
                                                    matches, other_shape));
  }
  return out;
}

Value build_pair_item(const AttributionList& rule, const Value* left, const ShapeInfo& lshape,
                      const Value* right, const ShapeInfo& rshape) {
  PairContext ctx{left, &lshape, right, &rshape};
  ResolveFn resolve = [&](const AttrPath& p) { return ctx.resolve(p); };
  return project_list(rule, resolve);
}

/// Per-anchor match lists, in the other side's scan order.
std::vector<std::vector<std::size_t>> compute_matches(
    const std::vector<WithCond>& with, const ItemsWithShape& left,
    const ItemsWithShape& right, bool anchor_is_left, bool hash_accelerated,
    bool build_left) {
  const auto& anchor = anchor_is_left ? left : right;
  const auto& other = anchor_is_left ? right : left;
  std::vector<std::vector<std::size_t>> matches(anchor.items.size());

  bool all_eq = !with.empty();
  for (const auto& c : with) {
    if (c.op != CmpOp::Eq) all_eq = false;
  }

  auto make_ctx = [&](const Value& a, const Value& o) {
    PairContext ctx;
    if (anchor_is_left) {
      ctx.left = &a;
      ctx.left_shape = &left.shape;
      ctx.right = &o;
      ctx.right_shape = &right.shape;
    } else {
      ctx.right = &a;
      ctx.right_shape = &right.shape;
      ctx.left = &o;
      ctx.left_shape = &left.shape;
    }
    return ctx;
  };

  if (hash_accelerated && all_eq) {
    // Key tuple per side; falls back to nested loop if a condition does not
    // split cleanly across the two sides.
    bool splits = true;
    std::vector<bool> lhs_on_anchor(with.size());
    for (std::size_t i = 0; i < with.size(); ++i) {
      const auto& cond = with[i];
      bool lhs_left = left.shape.covers(cond.lhs.root());
      bool rhs_left = left.shape.covers(cond.rhs.root());
      bool lhs_right = right.shape.covers(cond.lhs.root());
      bool rhs_right = right.shape.covers(cond.rhs.root());
      if (lhs_left && rhs_right) {
        lhs_on_anchor[i] = anchor_is_left;
      } else if (lhs_right && rhs_left) {
        lhs_on_anchor[i] = !anchor_is_left;
      } else {
        splits = false;
        break;
      }
    }
    if (splits) {
      auto key_of = [&](const Value& item, const ShapeInfo& shape, bool on_anchor) {
        std::vector<Value> key;
        key.reserve(with.size());
        for (std::size_t i = 0; i < with.size(); ++i) {
          const AttrPath& p = (lhs_on_anchor[i] == on_anchor) ? with[i].lhs : with[i].rhs;
          key.push_back(resolve_in_item(item, shape, p).value_or(Value::null()));
        }
        // Null = Null is True under eval_cmp; list equality mirrors that.
        return Value::list(std::move(key));
      };
      bool build_on_anchor = build_left == anchor_is_left;
      std::map<Value, std::vector<std::size_t>, ValueLess> table;
      if (build_on_anchor) {
        for (std::size_t i = 0; i < anchor.items.size(); ++i) {
          table[key_of(anchor.items[i], anchor.shape, true)].push_back(i);
        }
        // Probing in the other side's scan order keeps per-anchor match
        // lists in that order.
        for (std::size_t j = 0; j < other.items.size(); ++j) {
          auto it = table.find(key_of(other.items[j], other.shape, false));
          if (it == table.end()) continue;
          for (std::size_t i : it->second) matches[i].push_back(j);
        }
      } else {
        for (std::size_t j = 0; j < other.items.size(); ++j) {
          table[key_of(other.items[j], other.shape, false)].push_back(j);
        }
        for (std::size_t i = 0; i < anchor.items.size(); ++i) {
          auto it = table.find(key_of(anchor.items[i], anchor.shape, true));
          if (it != table.end()) matches[i] = it->second;
        }
      }
      return matches;
    }
  }

  for (std::size_t i = 0; i < anchor.items.size(); ++i) {
    for (std::size_t j = 0; j < other.items.size(); ++j) {
      PairContext ctx = make_ctx(anchor.items[i], other.items[j]);
      if (pair_matches(with, ctx)) matches[i].push_back(j);
    }
  }
  return matches;
}

}  // namespace

std::vector<Value> join_items(JoinKind kind, const AttributionList& rule,
                              const std::vector<WithCond>& with, const ItemsWithShape& left,
                              const ItemsWithShape& right, bool hash_accelerated,
                              bool build_left) {
  bool anchor_is_left = kind != JoinKind::Right;
  const auto& anchor = anchor_is_left ? left : right;
  const auto& other = anchor_is_left ? right : left;
  bool aggregating = has_aggregating_list(rule.attrs, other.shape);

  auto matches = compute_matches(with, left, right, anchor_is_left, hash_accelerated, build_left);

  std::vector<Value> out;
  for (std::size_t i = 0; i < anchor.items.size(); ++i) {
    const Value& a = anchor.items[i];
    std::vector<const Value*> ms;
    ms.reserve(matches[i].size());
    for (std::size_t j : matches[i]) ms.push_back(&other.items[j]);

    bool padded = kind == JoinKind::Left || kind == JoinKind::Right;
    if (ms.empty() && !padded) continue;  // JOIN / OM JOIN drop unmatched anchors

    if (aggregating) {
      out.push_back(project_rule_aggregated(rule.attrs, anchor_is_left, a, anchor.shape, ms,
                                            other.shape));
      continue;
    }
    if (kind == JoinKind::OneToOne) {
      // One association per anchor item: first match in scan order.
      const Value* m = ms.front();
      out.push_back(anchor_is_left ? build_pair_item(rule, &a, left.shape, m, right.shape)
                                   : build_pair_item(rule, m, left.shape, &a, right.shape));
      continue;
    }
    if (ms.empty()) {  // padded LEFT/RIGHT with no match
      out.push_back(anchor_is_left
                        ? build_pair_item(rule, &a, left.shape, nullptr, right.shape)
                        : build_pair_item(rule, nullptr, left.shape, &a, right.shape));
      continue;
    }
    for (const Value* m : ms) {
      out.push_back(anchor_is_left ? build_pair_item(rule, &a, left.shape, m, right.shape)
                                   : build_pair_item(rule, m, left.shape, &a, right.shape));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transfer legality and conversion

namespace {

bool tag_widens(const TypeTag& src, const TypeTag& dst) {
  if (dst.kind == TypeTag::Kind::Any) return true;
  if (src.kind == TypeTag::Kind::List && dst.kind == TypeTag::Kind::List) {
    TypeTag src_elem = src.element ? *src.element : TypeTag::of(TypeTag::Kind::Any);
    TypeTag dst_elem = dst.element ? *dst.element : TypeTag::of(TypeTag::Kind::Any);
    return tag_widens(src_elem, dst_elem);
  }
  if (src.kind == dst.kind) return true;
  if (src.kind == TypeTag::Kind::Int && dst.kind == TypeTag::Kind::String) return true;
  return false;
}

Value convert_widened_impl(const Value& v, const TypeTag& src, const TypeTag& dst) {
  if (v.is_null()) return v;
  if (src.kind == TypeTag::Kind::Int && dst.kind == TypeTag::Kind::String && v.is_int()) {
    return Value::str(std::to_string(v.as_int()));
  }
  if (src.kind == TypeTag::Kind::List && dst.kind == TypeTag::Kind::List && v.is_list()) {
    TypeTag src_elem = src.element ? *src.element : TypeTag::of(TypeTag::Kind::Any);
    TypeTag dst_elem = dst.element ? *dst.element : TypeTag::of(TypeTag::Kind::Any);
    std::vector<Value> elems;
    elems.reserve(v.elements().size());
    for (const auto& e : v.elements()) elems.push_back(convert_widened_impl(e, src_elem, dst_elem));
    return Value::list(std::move(elems));
  }
  return v;
}

std::vector<std::string> strip_root(const AttrPath& path) {
  return {path.segments.begin() + 1, path.segments.end()};
}

void collect_required_paths(const std::vector<NestedTriple>& fragments, const std::string& base,
                            std::vector<std::string>& out) {
  for (const auto& f : fragments) {
    std::string here = base.empty() ? f.attr_name() : base + "." + f.attr_name();
    if (f.kind == NestedTriple::Kind::Leaf) {
      if (f.leaf.constraint.kind == Constraint::Kind::NotNull ||
          f.leaf.constraint.kind == Constraint::Kind::Primary) {
        out.push_back(here);
      }
    } else if (f.kind == NestedTriple::Kind::MapNode) {
      collect_required_paths(f.children, here, out);
    }
    // Required leaves inside list elements cannot be covered by a single
    // co-relation pair; conformance still checks them per element.
  }
}

std::vector<std::string> required_target_paths(const ObjectScheme& scheme) {
  std::vector<std::string> out;
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    for (const auto& c : rel->columns) {
      if (c.constraint.kind == Constraint::Kind::NotNull ||
          c.constraint.kind == Constraint::Kind::Primary) {
        out.push_back(c.name);
      }
    }
  } else if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    out.push_back(kv->key.name);
  } else if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    collect_required_paths(doc->root, "", out);
  }
  return out;
}

std::string dotted_of(const std::vector<std::string>& segs) {
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i) out += ".";
    out += segs[i];
  }
  return out;
}

Value scheme_skeleton(const ObjectScheme& scheme);

Value fragment_skeleton(const std::vector<NestedTriple>& fragments) {
  Value out = Value::map();
  for (const auto& f : fragments) {
    switch (f.kind) {
      case NestedTriple::Kind::Leaf:
        out.set(f.leaf.name, Value::null());
        break;
      case NestedTriple::Kind::MapNode:
        out.set(f.name, fragment_skeleton(f.children));
        break;
      case NestedTriple::Kind::ListNode:
        out.set(f.name, Value::list());
        break;
    }
  }
  return out;
}

Value scheme_skeleton(const ObjectScheme& scheme) {
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    Value out = Value::map();
    for (const auto& c : rel->columns) out.set(c.name, Value::null());
    return out;
  }
  if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    Value out = Value::map();
    out.set(kv->key.name, Value::null());
    out.set(kv->value.name, Value::null());
    return out;
  }
  const auto& doc = std::get<DocumentScheme>(scheme);
  return fragment_skeleton(doc.root);
}

}  // namespace

std::vector<Violation> check_transfer_legality(const ObjectScheme& source,
                                               const ObjectScheme& target,
                                               const std::vector<CoRelPair>& co) {
  std::vector<Violation> out;
  if (co.empty()) {
    out.push_back({"", "co-relation must be nonempty"});
    return out;
  }
  for (const auto& pair : co) {
    std::string label = pair.source.dotted() + " : " + pair.target.dotted();
    if (pair.source.segments.size() < 2 || pair.target.segments.size() < 2) {
      out.push_back({label, "co-relation paths must be object-qualified"});
      continue;
    }
    auto src_type = scheme_attr_type(source, strip_root(pair.source));
    auto dst_type = scheme_attr_type(target, strip_root(pair.target));
    if (!src_type) {
      out.push_back({label, "source attribute does not exist"});
      continue;
    }
    if (!dst_type) {
      out.push_back({label, "target attribute does not exist"});
      continue;
    }
    if (!tag_widens(*src_type, *dst_type)) {
      out.push_back({label, "conversion narrows " + print_type_tag(*src_type) + " to " +
                                print_type_tag(*dst_type)});
    }
  }
  for (const auto& required : required_target_paths(target)) {
    bool covered = false;
    for (const auto& pair : co) {
      if (dotted_of(strip_root(pair.target)) == required) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      out.push_back({required, "required target attribute is not covered by the co-relation"});
    }
  }
  return out;
}

Value convert_widening(const Value& v, const TypeTag& source, const TypeTag& target) {
  return convert_widened_impl(v, source, target);
}

// ---------------------------------------------------------------------------
// Planner

namespace {

struct Conjunct {
  FilterExpr expr;
  std::vector<std::string> roots;
  bool is_path = false;
};

void gather_roots(const FilterExpr& f, std::vector<std::string>& out) {
  if (const auto* cmp = std::get_if<CmpFilter>(&f.node)) {
    out.push_back(cmp->lhs.root());
    if (const auto* p = std::get_if<AttrPath>(&cmp->rhs)) out.push_back(p->root());
    return;
  }
  if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
    for (const auto& c : logical->children) gather_roots(c, out);
    return;
  }
  if (const auto* match = std::get_if<MatchFilter>(&f.node)) {
    out.push_back(match->object.root());
    return;
  }
  if (const auto* call = std::get_if<CallFilter>(&f.node)) {
    out.push_back(call->object.root());
    return;
  }
  if (std::holds_alternative<PathFilter>(f.node)) {
    throw Error(ErrorCode::Unsupported, "PATH must be a top-level WHERE conjunct");
  }
}

void gather_output_roots(const NestedAttribution& attr, std::vector<std::string>& out) {
  if (attr.kind == NestedAttribution::Kind::AttrRef) {
    out.push_back(attr.ref.root());
    return;
  }
  for (const auto& c : attr.children) gather_output_roots(c, out);
}

std::vector<std::string> dedup(std::vector<std::string> names) {
  std::vector<std::string> out;
  for (auto& n : names) {
    if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
  }
  return out;
}

class Planner {
 public:
  Planner(const Catalog& catalog, const StoreSet& stores, const FilterFamily& filters,
          bool optimized)
      : catalog_(catalog), stores_(stores), filters_(filters), optimized_(optimized) {}

  Plan plan_query(const QueryStmt& query) {
    if (const auto* select = std::get_if<SelectStmt>(&query.node)) {
      return plan_select(*select);
    }
    // Bare JOIN: the join output with identity projection.
    JoinSource join = std::get<JoinSource>(query.node);
    expand_views_in_join(join);
    Plan plan;
    plan.roots.push_back(build_join_plan(join, {}));
    plan.labels.push_back(print_attribution_list_label(join.rule));
    return plan;
  }

 private:
  static std::string print_attribution_list_label(const AttributionList& list) {
    std::vector<std::string> parts;
    for (const auto& a : list.attrs) parts.push_back(print_attribution(a));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) out += ", ";
      out += parts[i];
    }
    return list.braced ? "{" + out + "}" : out;
  }

  // -- view expansion ---------------------------------------------------------

  Source expand_views_in_source(const Source& src) {
    if (const auto* ref = std::get_if<ObjectRef>(&src.node)) {
      if (!ref->qualified()) {
        if (const ViewDef* view = catalog_.find_view(ref->object())) {
          // Inline substitution of the view body.
          QueryStmt body = view->query;
          Source out;
          out.view_alias = view->name;
          if (auto* select = std::get_if<SelectStmt>(&body.node)) {
            expand_views_in_select(*select);
            out.node = Box<SelectStmt>(std::move(*select));
          } else {
            auto& join = std::get<JoinSource>(body.node);
            expand_views_in_join(join);
            out.node = std::move(join);
          }
          return out;
        }
      }
      return src;
    }
    if (const auto* join = std::get_if<JoinSource>(&src.node)) {
      JoinSource expanded = *join;
      expand_views_in_join(expanded);
      Source out;
      out.view_alias = src.view_alias;
      out.node = std::move(expanded);
      return out;
    }
    SelectStmt select = *std::get<Box<SelectStmt>>(src.node);
    expand_views_in_select(select);
    Source out;
    out.view_alias = src.view_alias;
    out.node = Box<SelectStmt>(std::move(select));
    return out;
  }

  void expand_views_in_join(JoinSource& join) {
    *join.left = expand_views_in_source(*join.left);
    *join.right = expand_views_in_source(*join.right);
  }

  void expand_views_in_select(SelectStmt& select) {
    ensure_from(select);
    for (auto& src : select.from) src = expand_views_in_source(src);
  }

  void ensure_from(SelectStmt& select) const {
    if (select.has_from) return;
    std::vector<std::string> roots;
    for (const auto& output : select.outputs) {
      for (const auto& attr : output.attrs) gather_output_roots(attr, roots);
    }
    for (const auto& root : dedup(std::move(roots))) {
      Source src;
      src.node = ObjectRef{{root}};
      select.from.push_back(std::move(src));
    }
    select.has_from = true;
  }

  // -- closures -----------------------------------------------------------------

  std::vector<std::string> source_closure(const Source& src) const {
    if (!src.view_alias.empty()) {
      auto inner = source_closure_node(src);
      inner.push_back(src.view_alias);
      return dedup(std::move(inner));
    }
    return source_closure_node(src);
  }

  std::vector<std::string> source_closure_node(const Source& src) const {
    if (const auto* ref = std::get_if<ObjectRef>(&src.node)) {
      return {ref->alias()};
    }
    if (const auto* join = std::get_if<JoinSource>(&src.node)) {
      auto left = source_closure(*join->left);
      auto right = source_closure(*join->right);
      left.insert(left.end(), right.begin(), right.end());
      return dedup(std::move(left));
    }
    const auto& select = std::get<Box<SelectStmt>>(src.node);
    std::vector<std::string> out;
    for (const auto& inner : select->from) {
      auto c = source_closure(inner);
      out.insert(out.end(), c.begin(), c.end());
    }
    return dedup(std::move(out));
  }

  // -- WHERE handling -------------------------------------------------------------

  std::vector<FilterExpr> flatten_conjuncts(const FilterExpr& where) const {
    if (where.is_null()) return {};
    if (const auto* logical = std::get_if<LogicalFilter>(&where.node)) {
      if (logical->op == LogicalOp::And) {
        std::vector<FilterExpr> out;
        for (const auto& c : logical->children) {
          auto nested = flatten_conjuncts(c);
          out.insert(out.end(), nested.begin(), nested.end());
        }
        return out;
      }
    }
    return {where};
  }

  /// Rewrites MATCH refs spelled as the full dotted object (G.Person) to the
  /// source alias so root-based assignment sees one spelling.
  void normalize_match_refs(FilterExpr& f, const std::vector<Source>& sources) const {
    if (auto* logical = std::get_if<LogicalFilter>(&f.node)) {
      for (auto& c : logical->children) normalize_match_refs(c, sources);
      return;
    }
    auto normalize = [&](AttrPath& object) {
      if (object.segments.size() < 2) return;
      for (const auto& src : sources) {
        if (const auto* ref = std::get_if<ObjectRef>(&src.node)) {
          if (ref->segments == object.segments) {
            object.segments = {ref->alias()};
            return;
          }
        }
      }
    };
    if (auto* match = std::get_if<MatchFilter>(&f.node)) normalize(match->object);
    if (auto* call = std::get_if<CallFilter>(&f.node)) normalize(call->object);
  }

  FilterExpr and_all(std::vector<FilterExpr> filters) const {
    if (filters.empty()) return FilterExpr{};
    if (filters.size() == 1) return std::move(filters[0]);
    LogicalFilter node;
    node.op = LogicalOp::And;
    node.children = std::move(filters);
    return FilterExpr{std::move(node)};
  }

  // -- base / join planning ----------------------------------------------------

  PlanNode build_source_plan(const Source& src, std::vector<Conjunct> conjuncts) {
    // Conjuncts addressing an inlined view by name must evaluate above the
    // expansion, where the alias is attached; the rest descend as usual.
    std::vector<Conjunct> inner, aliased;
    if (src.view_alias.empty()) {
      inner = std::move(conjuncts);
    } else {
      for (auto& c : conjuncts) {
        bool names_view = false;
        for (const auto& r : c.roots) names_view = names_view || r == src.view_alias;
        (names_view ? aliased : inner).push_back(std::move(c));
      }
    }
    PlanNode node;
    if (const auto* ref = std::get_if<ObjectRef>(&src.node)) {
      node = build_base_plan(*ref, std::move(inner));
    } else if (const auto* join = std::get_if<JoinSource>(&src.node)) {
      node = build_join_plan(*join, std::move(inner));
    } else {
      const auto& select = std::get<Box<SelectStmt>>(src.node);
      node = wrap_residual(plan_single_output_select(*select), std::move(inner));
    }
    if (!src.view_alias.empty()) {
      node.shape.self_alias = src.view_alias;
      node.shape.aliases.push_back(src.view_alias);
    }
    return wrap_residual(std::move(node), std::move(aliased));
  }

  PlanNode wrap_residual(PlanNode node, std::vector<Conjunct> conjuncts) {
    if (conjuncts.empty()) return node;
    std::vector<FilterExpr> filters;
    filters.reserve(conjuncts.size());
    for (auto& c : conjuncts) {
      if (c.is_path) {
        throw Error(ErrorCode::Unsupported,
                    "PATH filters apply to stored graph objects, not derived sources");
      }
      filters.push_back(std::move(c.expr));
    }
    PlanNode filter;
    filter.op = PlanNode::Op::Filter;
    filter.filter = and_all(std::move(filters));
    filter.shape = node.shape;
    filter.children.push_back(std::move(node));
    return filter;
  }

  PlanNode build_base_plan(const ObjectRef& ref, std::vector<Conjunct> conjuncts) {
    const CatalogEntry& entry = catalog_.get(ref.object());
    if (!entry.initialized()) {
      throw Error(ErrorCode::NotInitialized, "object " + ref.object() + " is not initialized");
    }
    const std::string& alias = ref.alias();

    ShapeInfo shape;
    shape.addressing = ShapeInfo::Addressing::Direct;
    shape.direct_alias = alias;
    shape.aliases = {alias};
    shape.model = entry.model;

    std::optional<GraphElementFilter> scan_filter;
    if (ref.qualified()) {
      if (entry.model != ModelType::Graph) {
        throw Error(ErrorCode::ModelMismatch,
                    ref.dotted() + " is scheme-qualified but " + ref.object() + " is not a graph");
      }
      const auto& graph = std::get<GraphScheme>(*entry.scheme);
      if (graph.node(ref.segments[1])) {
        scan_filter = GraphElementFilter{false, ref.segments[1]};
      } else if (graph.edge(ref.segments[1])) {
        scan_filter = GraphElementFilter{true, ref.segments[1]};
      } else {
        throw Error(ErrorCode::UnknownScheme,
                    ref.segments[1] + " is not a scheme of graph " + ref.object());
      }
    }

    validate_conjuncts(conjuncts, entry.model);

    // PATH conjunct: the whole leaf becomes a binding scan.
    std::vector<Conjunct> residual;
    std::optional<std::vector<PathStep>> path_steps;
    for (auto& c : conjuncts) {
      if (!c.is_path) {
        residual.push_back(std::move(c));
        continue;
      }
      if (entry.model != ModelType::Graph || ref.qualified()) {
        throw Error(ErrorCode::ModelMismatch,
                    "PATH filter requires an unqualified graph source, got " + ref.dotted());
      }
      if (path_steps) {
        throw Error(ErrorCode::Unsupported,
                    "only one PATH filter may apply to one graph source");
      }
      path_steps = std::get<PathFilter>(c.expr.node).steps;
    }

    PlanNode leaf;
    leaf.object = ref.object();
    leaf.shape = shape;
    leaf.scan_filter = scan_filter;
    if (path_steps) {
      leaf.op = PlanNode::Op::PathScan;
      leaf.path_steps = std::move(*path_steps);
      validate_path_steps(leaf.path_steps, *entry.scheme);
    } else if (optimized_ && entry.model == ModelType::KeyValue) {
      // Level two: an equality on the key attribute selects the KV primitive.
      const auto& kv = std::get<KeyValueScheme>(*entry.scheme);
      std::optional<std::size_t> key_conjunct;
      for (std::size_t i = 0; i < residual.size(); ++i) {
        const auto* cmp = std::get_if<CmpFilter>(&residual[i].expr.node);
        if (!cmp || cmp->op != CmpOp::Eq) continue;
        if (!std::holds_alternative<Value>(cmp->rhs)) continue;
        if (cmp->lhs.segments.size() == 2 && cmp->lhs.segments[0] == alias &&
            cmp->lhs.segments[1] == kv.key.name) {
          key_conjunct = i;
          break;
        }
      }
      if (key_conjunct) {
        leaf.op = PlanNode::Op::KvLookup;
        leaf.lookup_key = std::get<Value>(std::get<CmpFilter>(residual[*key_conjunct].expr.node).rhs);
        residual.erase(residual.begin() + static_cast<std::ptrdiff_t>(*key_conjunct));
      } else {
        leaf.op = PlanNode::Op::Scan;
      }
    } else {
      leaf.op = PlanNode::Op::Scan;
    }

    return wrap_residual(std::move(leaf), std::move(residual));
  }

  void validate_path_steps(const std::vector<PathStep>& steps, const ObjectScheme& scheme) const {
    const auto& graph = std::get<GraphScheme>(scheme);
    for (const auto& s : steps) {
      if (s.is_edge) {
        if (!graph.edge(s.scheme_name)) {
          throw Error(ErrorCode::UnknownScheme, "unknown edge scheme " + s.scheme_name);
        }
      } else if (!graph.node(s.scheme_name)) {
        throw Error(ErrorCode::UnknownScheme, "unknown node scheme " + s.scheme_name);
      }
    }
  }

  /// Plan-time validation: attribute roots resolve, registered filters exist.
  void validate_conjuncts(const std::vector<Conjunct>& conjuncts, ModelType model) const {
    for (const auto& c : conjuncts) {
      validate_filter(c.expr, model);
    }
  }

  void validate_filter(const FilterExpr& f, ModelType model) const {
    if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
      for (const auto& child : logical->children) validate_filter(child, model);
      return;
    }
    if (const auto* call = std::get_if<CallFilter>(&f.node)) {
      if (!filters_.registered(model, call->name)) {
        throw Error(ErrorCode::UnknownFilter,
                    call->name + " is not registered for " + model_type_name(model));
      }
      if (!filters_.find(model, call->name)) {
        throw Error(ErrorCode::UnknownFilter,
                    call->name + " names a structural filter, not a callable one");
      }
    }
  }

  bool rule_exposes(const AttributionList& rule, const AttrPath& path) const {
    for (const auto& col : attribution_columns(rule)) {
      const auto& src = col.source.segments;
      if (src.empty() || src.size() > path.segments.size()) continue;
      if (std::equal(src.begin(), src.end(), path.segments.begin())) return true;
    }
    return false;
  }

  bool conjunct_exposed(const FilterExpr& f, const AttributionList& rule) const {
    if (const auto* cmp = std::get_if<CmpFilter>(&f.node)) {
      if (!rule_exposes(rule, cmp->lhs)) return false;
      if (const auto* p = std::get_if<AttrPath>(&cmp->rhs)) {
        if (!rule_exposes(rule, *p)) return false;
      }
      return true;
    }
    if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
      for (const auto& c : logical->children) {
        if (!conjunct_exposed(c, rule)) return false;
      }
      return true;
    }
    if (const auto* match = std::get_if<MatchFilter>(&f.node)) {
      return rule_exposes(rule, match->object);
    }
    if (const auto* call = std::get_if<CallFilter>(&f.node)) {
      return rule_exposes(rule, call->object);
    }
    return true;
  }

  PlanNode build_join_plan(const JoinSource& join, std::vector<Conjunct> conjuncts) {
    auto left_closure = source_closure(*join.left);
    auto right_closure = source_closure(*join.right);

    auto covered_by = [](const std::vector<std::string>& roots,
                         const std::vector<std::string>& closure) {
      for (const auto& r : roots) {
        if (std::find(closure.begin(), closure.end(), r) == closure.end()) return false;
      }
      return !roots.empty();
    };

    // Aggregation is a property of the rule against each side; it decides
    // both output building and which pushdowns preserve semantics.
    ShapeInfo left_probe, right_probe;
    left_probe.aliases = left_closure;
    right_probe.aliases = right_closure;
    bool agg_right = has_aggregating_list(join.rule.attrs, right_probe);
    bool agg_left = has_aggregating_list(join.rule.attrs, left_probe);
    bool aggregating = join.kind == JoinKind::Right ? agg_left : agg_right;

    bool anchor_is_left = join.kind != JoinKind::Right;

    std::vector<Conjunct> pushed_left, pushed_right, post;
    for (auto& c : conjuncts) {
      if (!optimized_ || c.is_path) {
        post.push_back(std::move(c));
        continue;
      }
      bool to_left = covered_by(c.roots, left_closure);
      bool to_right = covered_by(c.roots, right_closure);
      bool exposed = conjunct_exposed(c.expr, join.rule);
      // Pushing through the anchor side is always sound; through the other
      // side only for a flattening OM JOIN (padding and first-match
      // tie-breaks change results otherwise).
      bool left_safe = anchor_is_left || (join.kind == JoinKind::OneToMany && !aggregating);
      bool right_safe = !anchor_is_left || (join.kind == JoinKind::OneToMany && !aggregating);
      if (to_left && exposed && left_safe) {
        pushed_left.push_back(std::move(c));
      } else if (to_right && exposed && right_safe) {
        pushed_right.push_back(std::move(c));
      } else {
        post.push_back(std::move(c));
      }
    }

    PlanNode node;
    node.op = PlanNode::Op::Join;
    node.join_kind = join.kind;
    node.rule = join.rule;
    node.with = join.with;
    node.children.push_back(build_source_plan(*join.left, std::move(pushed_left)));
    node.children.push_back(build_source_plan(*join.right, std::move(pushed_right)));

    bool all_eq = !join.with.empty();
    for (const auto& c : join.with) {
      if (c.op != CmpOp::Eq) all_eq = false;
    }
    node.hash_join = optimized_ && all_eq;
    node.build_left = estimate_count(node.children[0]) <= estimate_count(node.children[1]);

    node.shape.addressing = ShapeInfo::Addressing::Columns;
    node.shape.columns = attribution_columns(join.rule);
    check_distinct_columns(node.shape.columns);
    check_nested_keys(join.rule.attrs, true);
    node.shape.aliases = left_closure;
    node.shape.aliases.insert(node.shape.aliases.end(), right_closure.begin(),
                              right_closure.end());
    node.shape.aliases = dedup(std::move(node.shape.aliases));
    node.shape.model = node.children[0].shape.model;

    // WITH conditions must resolve somewhere inside the join.
    for (const auto& cond : join.with) {
      for (const AttrPath* p : {&cond.lhs, &cond.rhs}) {
        if (std::find(node.shape.aliases.begin(), node.shape.aliases.end(), p->root()) ==
                node.shape.aliases.end() &&
            p->segments.size() > 1) {
          throw Error(ErrorCode::UnresolvableAttribute,
                      p->dotted() + " does not resolve inside the join");
        }
      }
    }

    return wrap_residual(std::move(node), std::move(post));
  }

  void check_distinct_columns(const std::vector<OutputColumn>& columns) const {
    std::set<std::string> seen;
    for (const auto& c : columns) {
      if (!seen.insert(c.name).second) {
        throw Error(ErrorCode::AmbiguousAttribute,
                    "output key " + c.name + " appears more than once");
      }
    }
  }

  /// Sibling output keys must be distinct wherever the siblings form a map
  /// (list elements are positional and may repeat).
  void check_nested_keys(const std::vector<NestedAttribution>& attrs, bool map_context) const {
    std::set<std::string> seen;
    for (const auto& a : attrs) {
      if (map_context && !(a.kind == NestedAttribution::Kind::MapOut && a.name.empty())) {
        if (!seen.insert(a.output_key()).second) {
          throw Error(ErrorCode::AmbiguousAttribute,
                      "output key " + a.output_key() + " appears more than once");
        }
      }
      if (!a.children.empty()) {
        check_nested_keys(a.children, a.kind != NestedAttribution::Kind::ListOut);
      }
    }
  }

  std::size_t estimate_count(const PlanNode& node) const {
    switch (node.op) {
      case PlanNode::Op::KvLookup:
        return 1;
      case PlanNode::Op::Scan:
      case PlanNode::Op::PathScan: {
        if (!stores_.exists(node.object)) return 0;
        return stores_.get(node.object).item_count();
      }
      case PlanNode::Op::Join: {
        std::size_t l = estimate_count(node.children[0]);
        std::size_t r = estimate_count(node.children[1]);
        return l + r;
      }
      default:
        return node.children.empty() ? 0 : estimate_count(node.children[0]);
    }
  }

  // -- select planning -----------------------------------------------------------

  PlanNode plan_single_output_select(const SelectStmt& raw) {
    Plan plan = plan_select(raw);
    if (plan.roots.size() != 1) {
      throw Error(ErrorCode::Unsupported,
                  "a nested SELECT source must produce exactly one output object");
    }
    return std::move(plan.roots[0]);
  }

  Plan plan_select(const SelectStmt& raw) {
    SelectStmt select = raw;
    expand_views_in_select(select);
    normalize_match_refs(select.where, select.from);

    // Source aliases must be unambiguous.
    std::vector<std::vector<std::string>> closures;
    std::vector<std::string> all;
    for (const auto& src : select.from) {
      closures.push_back(source_closure(src));
      for (const auto& a : closures.back()) {
        if (std::find(all.begin(), all.end(), a) != all.end()) {
          throw Error(ErrorCode::DuplicateName, "source alias " + a + " appears twice in FROM");
        }
        all.push_back(a);
      }
    }

    // Split WHERE into conjuncts and assign each to the one source covering
    // all of its roots.
    std::vector<std::vector<Conjunct>> per_source(select.from.size());
    for (auto& expr : flatten_conjuncts(select.where)) {
      Conjunct c;
      if (std::holds_alternative<PathFilter>(expr.node)) {
        c.is_path = true;
        c.expr = std::move(expr);
        std::optional<std::size_t> graph_source;
        for (std::size_t i = 0; i < select.from.size(); ++i) {
          const auto* ref = std::get_if<ObjectRef>(&select.from[i].node);
          if (!ref || ref->qualified()) continue;
          const CatalogEntry* entry = catalog_.find(ref->object());
          if (entry && entry->model == ModelType::Graph) {
            if (graph_source) {
              throw Error(ErrorCode::Unsupported,
                          "PATH filter is ambiguous over several graph sources");
            }
            graph_source = i;
          }
        }
        if (!graph_source) {
          throw Error(ErrorCode::UnresolvableObject, "PATH filter needs a graph source in FROM");
        }
        per_source[*graph_source].push_back(std::move(c));
        continue;
      }
      gather_roots(expr, c.roots);
      c.roots = dedup(std::move(c.roots));
      c.expr = std::move(expr);
      if (c.roots.empty()) continue;  // vacuous (NULL filter)

      std::optional<std::size_t> target;
      for (std::size_t i = 0; i < closures.size(); ++i) {
        bool covers = true;
        for (const auto& r : c.roots) {
          if (std::find(closures[i].begin(), closures[i].end(), r) == closures[i].end()) {
            covers = false;
            break;
          }
        }
        if (covers) {
          target = i;
          break;
        }
      }
      if (!target) {
        for (const auto& r : c.roots) {
          if (std::find(all.begin(), all.end(), r) == all.end()) {
            throw Error(ErrorCode::UnresolvableObject, "unknown object " + r + " in WHERE");
          }
        }
        throw Error(ErrorCode::CrossObjectPredicateInSelect,
                    "a SELECT WHERE term references several objects; use JOIN");
      }
      per_source[*target].push_back(std::move(c));
    }

    // Every ORDER key must be resolvable against some source.
    for (const auto& key : select.order) {
      if (std::find(all.begin(), all.end(), key.path.root()) == all.end()) {
        throw Error(ErrorCode::UnresolvableObject,
                    "unknown object " + key.path.root() + " in ORDER BY");
      }
    }

    // Assign each output object to the one source covering its roots.
    Plan plan;
    for (const auto& output : select.outputs) {
      std::vector<std::string> roots;
      for (const auto& attr : output.attrs) gather_output_roots(attr, roots);
      roots = dedup(std::move(roots));
      if (roots.empty()) {
        throw Error(ErrorCode::UnresolvableAttribute, "output object references no attributes");
      }
      std::optional<std::size_t> source_index;
      for (std::size_t i = 0; i < closures.size(); ++i) {
        bool covers = true;
        for (const auto& r : roots) {
          if (std::find(closures[i].begin(), closures[i].end(), r) == closures[i].end()) {
            covers = false;
            break;
          }
        }
        if (covers) {
          source_index = i;
          break;
        }
      }
      if (!source_index) {
        for (const auto& r : roots) {
          if (std::find(all.begin(), all.end(), r) == all.end()) {
            throw Error(ErrorCode::UnresolvableObject, "unknown object " + r + " in SELECT");
          }
        }
        throw Error(ErrorCode::UnresolvableAttribute,
                    "an output object must draw from a single FROM source");
      }

      PlanNode node = build_source_plan(select.from[*source_index],
                                        per_source[*source_index]);

      // ORDER sits beneath the projection so keys may name unprojected
      // attributes.
      std::vector<OrderKey> keys;
      for (const auto& key : select.order) {
        if (std::find(closures[*source_index].begin(), closures[*source_index].end(),
                      key.path.root()) != closures[*source_index].end()) {
          keys.push_back(key);
        }
      }
      if (!keys.empty()) {
        PlanNode order;
        order.op = PlanNode::Op::Order;
        order.order_keys = std::move(keys);
        order.shape = node.shape;
        order.children.push_back(std::move(node));
        node = std::move(order);
      }

      bool identity = !output.braced && output.attrs.size() == 1 &&
                      output.attrs[0].kind == NestedAttribution::Kind::AttrRef &&
                      output.attrs[0].ref.segments.size() == 1 &&
                      node.shape.covers(output.attrs[0].ref.root());
      if (identity) {
        // Identity projection: items pass through unchanged.
      } else {
        PlanNode project;
        project.op = PlanNode::Op::Project;
        project.projection = output;
        project.shape.addressing = ShapeInfo::Addressing::Columns;
        project.shape.columns = attribution_columns(output);
        check_distinct_columns(project.shape.columns);
        check_nested_keys(output.attrs, true);
        project.shape.aliases = node.shape.aliases;
        project.shape.model = node.shape.model;
        project.children.push_back(std::move(node));
        node = std::move(project);
      }

      if (select.distinct) {
        PlanNode distinct;
        distinct.op = PlanNode::Op::Distinct;
        distinct.shape = node.shape;
        distinct.children.push_back(std::move(node));
        node = std::move(distinct);
      }

      plan.labels.push_back(print_attribution_list_label(output));
      plan.roots.push_back(std::move(node));
    }
    return plan;
  }

  const Catalog& catalog_;
  const StoreSet& stores_;
  const FilterFamily& filters_;
  bool optimized_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Execution

TriBool eval_filter_item(const FilterExpr& f, const Value& item, const ShapeInfo& shape,
                         const FilterFamily& registry) {
  if (std::holds_alternative<NullFilter>(f.node)) return TriBool::True;
  if (std::holds_alternative<CmpFilter>(f.node)) {
    return eval_basic(f, [&](const AttrPath& p) { return resolve_in_item(item, shape, p); });
  }
  if (const auto* logical = std::get_if<LogicalFilter>(&f.node)) {
    switch (logical->op) {
      case LogicalOp::Not:
        return tri_not(eval_filter_item(logical->children.front(), item, shape, registry));
      case LogicalOp::And: {
        TriBool acc = TriBool::True;
        for (const auto& c : logical->children) {
          acc = tri_and(acc, eval_filter_item(c, item, shape, registry));
        }
        return acc;
      }
      case LogicalOp::Or: {
        TriBool acc = TriBool::False;
        for (const auto& c : logical->children) {
          acc = tri_or(acc, eval_filter_item(c, item, shape, registry));
        }
        return acc;
      }
      case LogicalOp::Xor: {
        TriBool acc = eval_filter_item(logical->children.front(), item, shape, registry);
        for (std::size_t i = 1; i < logical->children.size(); ++i) {
          acc = tri_xor(acc, eval_filter_item(logical->children[i], item, shape, registry));
        }
        return acc;
      }
    }
  }
  if (const auto* match = std::get_if<MatchFilter>(&f.node)) {
    if (match->object.segments.size() == 1 &&
        shape.addressing == ShapeInfo::Addressing::Direct &&
        match->object.root() == shape.direct_alias) {
      return tri_of(eval_match(match->pattern, item));
    }
    Value target = resolve_in_item(item, shape, match->object).value_or(Value::null());
    return tri_of(eval_match(match->pattern, target));
  }
  if (const auto* call = std::get_if<CallFilter>(&f.node)) {
    const FilterEvaluator* evaluator = registry.find(shape.model, call->name);
    if (!evaluator) {
      throw Error(ErrorCode::UnknownFilter, call->name + " is not registered");
    }
    return (*evaluator)(item, call->args);
  }
  throw Error(ErrorCode::Unsupported, "PATH filter cannot run as a per-item predicate");
}

ResultSet Database::execute(const Plan& plan) const {
  ResultSet rs;
  for (std::size_t i = 0; i < plan.roots.size(); ++i) {
    ItemsWithShape top = execute_node(plan.roots[i]);
    OutputObject out;
    out.label = i < plan.labels.size() ? plan.labels[i] : "";
    out.columns = top.shape.columns;
    out.items = std::move(top.items);
    rs.outputs.push_back(std::move(out));
  }
  return rs;
}

ItemsWithShape Database::execute_node(const PlanNode& node) const {
  switch (node.op) {
    case PlanNode::Op::Scan: {
      ItemsWithShape out;
      out.shape = node.shape;
      for (auto& [ref, item] : stores_.scan(node.object, node.scan_filter)) {
        out.items.push_back(std::move(item));
      }
      return out;
    }
    case PlanNode::Op::KvLookup: {
      ItemsWithShape out;
      out.shape = node.shape;
      auto value = stores_.kv_lookup(node.object, node.lookup_key);
      if (value) {
        auto [key_name, value_name] = StoreSet::kv_attr_names(stores_.get(node.object));
        Value item = Value::map();
        item.set(key_name, node.lookup_key);
        item.set(value_name, *value);
        out.items.push_back(std::move(item));
      }
      return out;
    }
    case PlanNode::Op::PathScan: {
      ItemsWithShape out;
      out.shape = node.shape;
      const ObjectStore& store = stores_.get(node.object);
      for (const auto& binding : eval_path(node.path_steps, stores_, node.object)) {
        Value item = Value::map();
        std::size_t node_index = 0, edge_index = 0;
        for (std::size_t i = 0; i < binding.refs.size(); ++i) {
          const ItemRef& ref = binding.refs[i];
          std::string key = ref.kind == ItemRef::Kind::Edge
                                ? "e" + std::to_string(edge_index++)
                                : "n" + std::to_string(node_index++);
          item.set(key, stores_.fetch(store, ref));
        }
        out.items.push_back(std::move(item));
      }
      return out;
    }
    case PlanNode::Op::Filter: {
      ItemsWithShape child = execute_node(node.children[0]);
      ItemsWithShape out;
      out.shape = node.shape;
      for (auto& item : child.items) {
        if (eval_filter_item(node.filter, item, child.shape, filters_) == TriBool::True) {
          out.items.push_back(std::move(item));
        }
      }
      return out;
    }
    case PlanNode::Op::Join: {
      ItemsWithShape left = execute_node(node.children[0]);
      ItemsWithShape right = execute_node(node.children[1]);
      ItemsWithShape out;
      out.shape = node.shape;
      out.items = join_items(node.join_kind, node.rule, node.with, left, right, node.hash_join,
                             node.build_left);
      return out;
    }
    case PlanNode::Op::Order: {
      ItemsWithShape child = execute_node(node.children[0]);
      std::stable_sort(child.items.begin(), child.items.end(),
                       [&](const Value& a, const Value& b) {
                         for (const auto& key : node.order_keys) {
                           Value av = resolve_in_item(a, child.shape, key.path)
                                          .value_or(Value::null());
                           Value bv = resolve_in_item(b, child.shape, key.path)
                                          .value_or(Value::null());
                           Ordering o = compare_values(av, bv);
                           if (o == Ordering::Equal) continue;
                           bool less = o == Ordering::Less;
                           return key.ascending ? less : !less;
                         }
                         return false;
                       });
      return child;
    }
    case PlanNode::Op::Project: {
      ItemsWithShape child = execute_node(node.children[0]);
      ItemsWithShape out;
      out.shape = node.shape;
      out.items.reserve(child.items.size());
      for (const auto& item : child.items) {
        out.items.push_back(project_item(item, child.shape, node.projection));
      }
      return out;
    }
    case PlanNode::Op::Distinct: {
      ItemsWithShape child = execute_node(node.children[0]);
      ItemsWithShape out;
      out.shape = node.shape;
      std::set<Value, ValueLess> seen;
      for (auto& item : child.items) {
        if (seen.insert(item).second) out.items.push_back(std::move(item));
      }
      return out;
    }
  }
  throw Error(ErrorCode::Unsupported, "unknown plan operator");
}

Plan Database::plan(const QueryStmt& query, bool optimized) const {
  Planner planner(catalog_, stores_, filters_, optimized);
  return planner.plan_query(query);
}

void Database::clear() {
  catalog_.drop_all();
  stores_.drop_all();
}

// ---------------------------------------------------------------------------
// DML and TRANSFER

namespace {

struct InsertTarget {
  std::string object;
  std::string scheme_tag;
  const CatalogEntry* entry;
};

InsertTarget resolve_insert_target(const Catalog& catalog, const ObjectRef& ref) {
  InsertTarget t;
  t.object = ref.object();
  t.entry = &catalog.get(t.object);
  if (!t.entry->initialized()) {
    throw Error(ErrorCode::NotInitialized, "object " + t.object + " is not initialized");
  }
  if (ref.qualified()) {
    if (t.entry->model != ModelType::Graph) {
      throw Error(ErrorCode::ModelMismatch, t.object + " is not a graph object");
    }
    t.scheme_tag = ref.segments[1];
  }
  return t;
}

Value tuple_to_item(const Value& tuple, const InsertTarget& target) {
  const auto& fields = tuple.elements();
  if (target.entry->model == ModelType::Relation) {
    const auto& rel = std::get<RelationalScheme>(*target.entry->scheme);
    if (fields.size() != rel.columns.size()) {
      throw Error(ErrorCode::ShapeMismatch,
                  "tuple arity " + std::to_string(fields.size()) + " does not match " +
                      std::to_string(rel.columns.size()) + " columns");
    }
    Value item = Value::map();
    for (std::size_t i = 0; i < fields.size(); ++i) item.set(rel.columns[i].name, fields[i]);
    return item;
  }
  if (target.entry->model == ModelType::KeyValue) {
    const auto& kv = std::get<KeyValueScheme>(*target.entry->scheme);
    if (fields.size() != 2) {
      throw Error(ErrorCode::ShapeMismatch, "KV tuples carry exactly a key and a value");
    }
    Value item = Value::map();
    item.set(kv.key.name, fields[0]);
    item.set(kv.value.name, fields[1]);
    return item;
  }
  throw Error(ErrorCode::ShapeMismatch,
              "positional tuples insert into RELATION or KV objects; use map values here");
}

std::vector<std::string> top_level_attr_names(const ObjectScheme& scheme,
                                              const std::string& scheme_tag) {
  std::vector<std::string> out;
  if (const auto* rel = std::get_if<RelationalScheme>(&scheme)) {
    for (const auto& c : rel->columns) out.push_back(c.name);
  } else if (const auto* kv = std::get_if<KeyValueScheme>(&scheme)) {
    out.push_back(kv->key.name);
    out.push_back(kv->value.name);
  } else if (const auto* doc = std::get_if<DocumentScheme>(&scheme)) {
    for (const auto& f : doc->root) out.push_back(f.attr_name());
  } else {
    const auto& graph = std::get<GraphScheme>(scheme);
    if (const NodeScheme* n = graph.node(scheme_tag)) {
      for (const auto& f : n->properties) out.push_back(f.attr_name());
    } else if (const EdgeScheme* e = graph.edge(scheme_tag)) {
      out.push_back("FROM");
      out.push_back("TO");
      for (const auto& f : e->properties) out.push_back(f.attr_name());
    }
  }
  return out;
}

}  // namespace

std::size_t Database::execute_insert(const InsertStmt& stmt) {
  InsertTarget target = resolve_insert_target(catalog_, stmt.target);
  std::vector<Value> items;
  if (stmt.query) {
    ResultSet rs = query(*stmt.query);
    if (rs.outputs.size() != 1) {
      throw Error(ErrorCode::ShapeMismatch, "INSERT QUERY requires exactly one output object");
    }
    const OutputObject& out = rs.outputs[0];
    if (!out.columns.empty()) {
      auto declared = top_level_attr_names(*target.entry->scheme, target.scheme_tag);
      for (const auto& col : out.columns) {
        if (std::find(declared.begin(), declared.end(), col.name) == declared.end()) {
          throw Error(ErrorCode::ShapeMismatch,
                      "query output key " + col.name + " is not an attribute of " +
                          stmt.target.dotted());
        }
      }
    }
    items = out.items;
  } else {
    items.reserve(stmt.items.size());
    for (const auto& item : stmt.items) {
      items.push_back(item.tuple ? tuple_to_item(item.value, target) : item.value);
    }
  }
  return stores_.insert_items(target.object, target.scheme_tag, items);
}

std::vector<std::pair<ItemRef, Value>> Database::select_refs(const ObjectRef& target,
                                                             const FilterExpr& where) const {
  const CatalogEntry& entry = catalog_.get(target.object());
  if (!entry.initialized()) {
    throw Error(ErrorCode::NotInitialized, "object " + target.object() + " is not initialized");
  }
  std::optional<GraphElementFilter> filter;
  if (target.qualified()) {
    if (entry.model != ModelType::Graph) {
      throw Error(ErrorCode::ModelMismatch, target.object() + " is not a graph object");
    }
    const auto& graph = std::get<GraphScheme>(*entry.scheme);
    if (graph.node(target.segments[1])) {
      filter = GraphElementFilter{false, target.segments[1]};
    } else if (graph.edge(target.segments[1])) {
      filter = GraphElementFilter{true, target.segments[1]};
    } else {
      throw Error(ErrorCode::UnknownScheme,
                  target.segments[1] + " is not a scheme of graph " + target.object());
    }
  }

  ShapeInfo shape;
  shape.addressing = ShapeInfo::Addressing::Direct;
  shape.direct_alias = target.alias();
  shape.aliases = {target.alias(), target.object()};
  shape.model = entry.model;

  if (!where.is_null()) {
    std::vector<std::string> roots;
    gather_roots(where, roots);
    for (const auto& root : roots) {
      if (!shape.covers(root)) {
        throw Error(ErrorCode::UnresolvableObject,
                    "WHERE references " + root + " but the statement targets " +
                        target.dotted());
      }
    }
  }

  std::vector<std::pair<ItemRef, Value>> selected;
  for (auto& [ref, item] : stores_.scan(target.object(), filter)) {
    if (eval_filter_item(where, item, shape, filters_) == TriBool::True) {
      selected.push_back({ref, std::move(item)});
    }
  }
  return selected;
}

std::size_t Database::execute_update(const UpdateStmt& stmt) {
  auto selected = select_refs(stmt.target, stmt.where);
  if (selected.empty()) return 0;

  SetAction action;
  for (const auto& a : stmt.sets) {
    std::vector<std::string> rel = a.path.segments;
    if (rel.size() > 1 &&
        (rel.front() == stmt.target.alias() || rel.front() == stmt.target.object())) {
      rel.erase(rel.begin());
    }
    action.assignments.push_back({std::move(rel), a.value});
  }
  std::vector<ItemRef> refs;
  refs.reserve(selected.size());
  for (auto& [ref, item] : selected) refs.push_back(ref);
  return stores_.apply_mutation(stmt.target.object(), refs, MutationAction{action});
}

std::size_t Database::execute_delete(const DeleteStmt& stmt) {
  auto selected = select_refs(stmt.target, stmt.where);
  if (selected.empty()) return 0;
  std::vector<ItemRef> refs;
  refs.reserve(selected.size());
  for (auto& [ref, item] : selected) refs.push_back(ref);
  return stores_.apply_mutation(stmt.target.object(), refs, MutationAction{DeleteAction{}});
}

namespace {

void set_into_skeleton(Value& out, const std::vector<std::string>& path, const Value& value) {
  Value* v = &out;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!v->is_map()) {
      throw Error(ErrorCode::TransferIllegal, "target path crosses a non-map attribute");
    }
    Value* child = const_cast<Value*>(v->find(path[i]));
    if (!child) {
      throw Error(ErrorCode::TransferIllegal, "target path names a missing attribute " + path[i]);
    }
    v = child;
  }
  if (!v->is_map() || path.empty()) {
    throw Error(ErrorCode::TransferIllegal, "invalid target path");
  }
  v->set(path.back(), value);
}

/// Scheme used for typing a TRANSFER source: a real object's scheme, or a
/// pseudo relational scheme derived from a query's output columns (column
/// types come from the underlying base attribute where derivable, ANY
/// otherwise).
ObjectScheme transfer_source_scheme(const Catalog& catalog, const std::string& root,
                                    const std::vector<OutputColumn>& columns) {
  RelationalScheme pseudo;
  (void)root;
  for (const auto& col : columns) {
    TypeTag tag = TypeTag::of(TypeTag::Kind::Any);
    if (col.source.segments.size() >= 2) {
      if (const CatalogEntry* entry = catalog.find(col.source.root())) {
        if (entry->initialized()) {
          std::vector<std::string> rest(col.source.segments.begin() + 1,
                                        col.source.segments.end());
          if (auto t = scheme_attr_type(*entry->scheme, rest)) tag = *t;
        }
      }
    }
    pseudo.columns.push_back({col.name, tag, Constraint::none()});
  }
  return pseudo;
}

}  // namespace

std::size_t Database::execute_transfer(const TransferStmt& stmt) {
  const CatalogEntry& target = catalog_.get(stmt.target);
  if (!target.initialized()) {
    throw Error(ErrorCode::NotInitialized, "object " + stmt.target + " is not initialized");
  }
  if (target.model == ModelType::Graph) {
    throw Error(ErrorCode::Unsupported,
                "TRANSFER into graph objects is not supported; insert tagged items instead");
  }

  // Source items plus a scheme for legality typing.
  std::vector<Value> source_items;
  ShapeInfo source_shape;
  ObjectScheme source_scheme;
  if (stmt.source_object) {
    const CatalogEntry& src = catalog_.get(stmt.source_object->object());
    if (!src.initialized()) {
      throw Error(ErrorCode::NotInitialized,
                  "object " + stmt.source_object->object() + " is not initialized");
    }
    if (src.model == ModelType::Graph) {
      throw Error(ErrorCode::Unsupported,
                  "TRANSFER from whole graph objects is not supported");
    }
    source_scheme = *src.scheme;
    source_shape.addressing = ShapeInfo::Addressing::Direct;
    source_shape.direct_alias = stmt.source_object->alias();
    source_shape.aliases = {stmt.source_object->alias()};
    source_shape.model = src.model;
    for (auto& [ref, item] : stores_.scan(stmt.source_object->object())) {
      source_items.push_back(std::move(item));
    }
  } else {
    Plan p = plan(*stmt.source_query);
    if (p.roots.size() != 1) {
      throw Error(ErrorCode::ShapeMismatch, "TRANSFER query must produce one output object");
    }
    ResultSet rs = execute(p);
    source_shape = p.roots[0].shape;
    source_scheme = transfer_source_scheme(catalog_, "", source_shape.columns);
    source_items = std::move(rs.outputs[0].items);
  }

  auto violations = check_transfer_legality(source_scheme, *target.scheme, stmt.co_relation);
  if (!violations.empty()) {
    throw Error(ErrorCode::TransferIllegal, violations_to_string(violations));
  }

  // Per-item field mapping through the co-relation.
  std::vector<Value> converted;
  converted.reserve(source_items.size());
  Value skeleton = scheme_skeleton(*target.scheme);
  for (const auto& item : source_items) {
    Value out = skeleton;
    for (const auto& pair : stmt.co_relation) {
      std::optional<Value> v;
      if (source_shape.addressing == ShapeInfo::Addressing::Direct) {
        // Source paths are object-qualified; re-root them at the alias.
        AttrPath rerooted = pair.source;
        rerooted.segments[0] = source_shape.direct_alias;
        v = resolve_in_item(item, source_shape, rerooted);
      } else {
        v = resolve_in_item(item, source_shape, pair.source);
      }
      auto src_type = scheme_attr_type(source_scheme, strip_root(pair.source));
      auto dst_type = scheme_attr_type(*target.scheme, strip_root(pair.target));
      Value value = v.value_or(Value::null());
      if (src_type && dst_type) value = convert_widening(value, *src_type, *dst_type);
      set_into_skeleton(out, strip_root(pair.target), value);
    }
    converted.push_back(std::move(out));
  }
  return stores_.insert_items(stmt.target, "", converted);
}

Database::ExecResult Database::run(const Statement& stmt) {
  ExecResult result;
  if (const auto* create = std::get_if<CreateObject>(&stmt)) {
    catalog_.create(create->type, create->name);
    result.kind = ExecResult::Kind::Ack;
    result.ack = "created " + create->name;
    return result;
  }
  if (const auto* init = std::get_if<InitObject>(&stmt)) {
    CatalogEntry& entry = catalog_.init(init->name, init->scheme);
    stores_.create(init->name, entry.model, *entry.scheme);
    result.kind = ExecResult::Kind::Ack;
    result.ack = "initialized " + init->name;
    return result;
  }
  if (const auto* view = std::get_if<CreateView>(&stmt)) {
    catalog_.define_view(view->vtype, view->name, *view->query);
    result.kind = ExecResult::Kind::Ack;
    result.ack = "view " + view->name + " defined";
    return result;
  }
  if (const auto* q = std::get_if<QueryStmt>(&stmt)) {
    result.kind = ExecResult::Kind::Results;
    result.results = query(*q);
    return result;
  }
  result.kind = ExecResult::Kind::Count;
  if (const auto* insert = std::get_if<InsertStmt>(&stmt)) {
    result.count = execute_insert(*insert);
  } else if (const auto* update = std::get_if<UpdateStmt>(&stmt)) {
    result.count = execute_update(*update);
  } else if (const auto* del = std::get_if<DeleteStmt>(&stmt)) {
    result.count = execute_delete(*del);
  } else {
    result.count = execute_transfer(std::get<TransferStmt>(stmt));
  }
  return result;
}

}  // namespace msql
