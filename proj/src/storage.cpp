#include "msql/storage.hpp"

#include <algorithm>
#include <set>

#include "msql/error.hpp"

namespace msql {

namespace {

int kind_rank(ItemRef::Kind k) {
  switch (k) {
    case ItemRef::Kind::Row: return 0;
    case ItemRef::Kind::Pair: return 1;
    case ItemRef::Kind::Doc: return 2;
    case ItemRef::Kind::Node: return 3;
    case ItemRef::Kind::Edge: return 4;
  }
  return 5;
}

std::vector<NestedTriple> relational_fragments(const RelationalScheme& rel) {
  std::vector<NestedTriple> out;
  out.reserve(rel.columns.size());
  for (const auto& c : rel.columns) out.push_back(NestedTriple::make_leaf(c));
  return out;
}

std::vector<NestedTriple> kv_fragments(const KeyValueScheme& kv) {
  return {NestedTriple::make_leaf(kv.key), NestedTriple::make_leaf(kv.value)};
}

}  // namespace

bool ItemRef::operator==(const ItemRef& other) const {
  return object == other.object && kind == other.kind && scheme == other.scheme &&
         compare_values(key, other.key) == Ordering::Equal && ordinal == other.ordinal;
}

bool item_ref_less(const ItemRef& a, const ItemRef& b) {
  if (a.object != b.object) return a.object < b.object;
  if (a.kind != b.kind) return kind_rank(a.kind) < kind_rank(b.kind);
  if (a.scheme != b.scheme) return a.scheme < b.scheme;
  Ordering o = compare_values(a.key, b.key);
  if (o != Ordering::Equal) return o == Ordering::Less;
  return a.ordinal < b.ordinal;
}

void GraphStore::rebuild_adjacency() {
  out_index.clear();
  in_index.clear();
  for (const auto& [scheme, list] : edges) {
    auto& out = out_index[scheme];
    auto& in = in_index[scheme];
    for (std::size_t i = 0; i < list.size(); ++i) {
      out[list[i].from].push_back(i);
      in[list[i].to].push_back(i);
    }
  }
}

std::size_t ObjectStore::item_count() const {
  switch (model) {
    case ModelType::Relation: return rows.size();
    case ModelType::KeyValue: return pairs.size();
    case ModelType::Document: return docs.size();
    case ModelType::Graph: {
      std::size_t n = 0;
      for (const auto& [s, m] : graph.nodes) n += m.size();
      for (const auto& [s, v] : graph.edges) n += v.size();
      return n;
    }
  }
  return 0;
}

void StoreSet::create(const std::string& name, ModelType model, ObjectScheme scheme) {
  ObjectStore store;
  store.name = name;
  store.model = model;
  store.scheme = std::move(scheme);
  if (model == ModelType::Graph) {
    const auto& graph = std::get<GraphScheme>(store.scheme);
    for (const auto& n : graph.nodes) store.graph.nodes[n.name];
    for (const auto& e : graph.edges) store.graph.edges[e.name];
  }
  stores_[name] = std::move(store);
}

bool StoreSet::exists(const std::string& name) const { return stores_.count(name) > 0; }

const ObjectStore& StoreSet::get(const std::string& name) const {
  auto it = stores_.find(name);
  if (it == stores_.end()) {
    throw Error(ErrorCode::UnknownObject, "object " + name + " has no initialized store");
  }
  return it->second;
}

ObjectStore& StoreSet::get_mutable(const std::string& name) {
  auto it = stores_.find(name);
  if (it == stores_.end()) {
    throw Error(ErrorCode::UnknownObject, "object " + name + " has no initialized store");
  }
  return it->second;
}

std::pair<std::string, std::string> StoreSet::kv_attr_names(const ObjectStore& store) {
  const auto& kv = std::get<KeyValueScheme>(store.scheme);
  return {kv.key.name, kv.value.name};
}

Value StoreSet::edge_item(const GraphEdgeRecord& edge) {
  Value item = Value::map();
  item.set("FROM", edge.from);
  item.set("TO", edge.to);
  for (const auto& [k, v] : edge.properties.entries()) item.set(k, v);
  return item;
}

namespace {

void conformance_or_throw(const std::vector<Violation>& violations) {
  if (!violations.empty()) {
    throw Error(ErrorCode::ConformanceError, violations_to_string(violations));
  }
}

void insert_one(ObjectStore& store, const std::string& scheme_tag, const Value& item) {
  switch (store.model) {
    case ModelType::Relation: {
      const auto& rel = std::get<RelationalScheme>(store.scheme);
      conformance_or_throw(conforms_fragments(item, relational_fragments(rel)));
      if (const Triple* pk = rel.primary_column()) {
        const Value* key = item.find(pk->name);
        for (const auto& row : store.rows) {
          if (key && *row.find(pk->name) == *key) {
            throw Error(ErrorCode::DuplicatePrimaryKey,
                        "duplicate PRIMARY value " + print_value(*key));
          }
        }
      }
      store.rows.push_back(item);
      return;
    }
    case ModelType::KeyValue: {
      const auto& kv = std::get<KeyValueScheme>(store.scheme);
      conformance_or_throw(conforms_fragments(item, kv_fragments(kv)));
      const Value& key = *item.find(kv.key.name);
      if (store.pairs.count(key)) {
        throw Error(ErrorCode::DuplicatePrimaryKey, "duplicate key " + print_value(key));
      }
      store.pairs[key] = *item.find(kv.value.name);
      return;
    }
    case ModelType::Document: {
      const auto& doc = std::get<DocumentScheme>(store.scheme);
      conformance_or_throw(conforms_fragments(item, doc.root));
      store.docs.push_back(item);
      return;
    }
    case ModelType::Graph: {
      const auto& graph = std::get<GraphScheme>(store.scheme);
      if (const NodeScheme* node = graph.node(scheme_tag)) {
        conformance_or_throw(conforms_fragments(item, node->properties));
        const Value& key = *item.find(node->key_triple()->name);
        auto& keyed = store.graph.nodes[node->name];
        if (keyed.count(key)) {
          throw Error(ErrorCode::DuplicatePrimaryKey,
                      "duplicate node key " + print_value(key) + " in " + node->name);
        }
        keyed[key] = item;
        return;
      }
      if (const EdgeScheme* edge = graph.edge(scheme_tag)) {
        const Value* from = item.find("FROM");
        const Value* to = item.find("TO");
        if (!from || !to) {
          throw Error(ErrorCode::ConformanceError, "edge item must carry FROM and TO");
        }
        Value props = Value::map();
        for (const auto& [k, v] : item.entries()) {
          if (k != "FROM" && k != "TO") props.set(k, v);
        }
        conformance_or_throw(conforms_fragments(props, edge->properties));
        const auto* from_nodes = &store.graph.nodes[edge->from_scheme];
        const auto* to_nodes = &store.graph.nodes[edge->to_scheme];
        if (!from_nodes->count(*from) || !to_nodes->count(*to)) {
          throw Error(ErrorCode::DanglingEdge,
                      "edge endpoints " + print_value(*from) + " -> " + print_value(*to) +
                          " must exist");
        }
        store.graph.edges[edge->name].push_back({*from, *to, std::move(props)});
        return;
      }
      throw Error(ErrorCode::UnknownScheme,
                  scheme_tag.empty() ? "graph insert requires a node or edge scheme tag"
                                     : "unknown graph scheme " + scheme_tag);
    }
  }
}

}  // namespace

std::size_t StoreSet::insert_items(const std::string& name, const std::string& scheme_tag,
                                   const std::vector<Value>& items) {
  ObjectStore& live = get_mutable(name);
  if (live.model != ModelType::Graph && !scheme_tag.empty()) {
    throw Error(ErrorCode::ModelMismatch, name + " is not a graph object");
  }
  ObjectStore changed = live;  // atomic batch: mutate a copy
  for (const auto& item : items) {
    insert_one(changed, scheme_tag, item);
  }
  if (changed.model == ModelType::Graph) changed.graph.rebuild_adjacency();
  validate_store(changed);
  live = std::move(changed);
  return items.size();
}

std::vector<std::pair<ItemRef, Value>> StoreSet::scan(
    const std::string& name, const std::optional<GraphElementFilter>& filter) const {
  const ObjectStore& store = get(name);
  std::vector<std::pair<ItemRef, Value>> out;
  auto count_visit = [&](std::size_t n) { visits_[name] += n; };
  switch (store.model) {
    case ModelType::Relation:
      for (std::size_t i = 0; i < store.rows.size(); ++i) {
        out.push_back({ItemRef{name, ItemRef::Kind::Row, "", Value(), i}, store.rows[i]});
      }
      break;
    case ModelType::KeyValue: {
      auto [key_name, value_name] = kv_attr_names(store);
      for (const auto& [k, v] : store.pairs) {
        Value item = Value::map();
        item.set(key_name, k);
        item.set(value_name, v);
        out.push_back({ItemRef{name, ItemRef::Kind::Pair, "", k, 0}, std::move(item)});
      }
      break;
    }
    case ModelType::Document:
      for (std::size_t i = 0; i < store.docs.size(); ++i) {
        out.push_back({ItemRef{name, ItemRef::Kind::Doc, "", Value(), i}, store.docs[i]});
      }
      break;
    case ModelType::Graph: {
      const auto& graph = std::get<GraphScheme>(store.scheme);
      bool want_nodes = !filter || !filter->edges;
      bool want_edges = !filter || filter->edges;
      if (want_nodes) {
        for (const auto& scheme : graph.nodes) {
          if (filter && !filter->scheme.empty() && filter->scheme != scheme.name) continue;
          auto it = store.graph.nodes.find(scheme.name);
          if (it == store.graph.nodes.end()) continue;
          for (const auto& [key, item] : it->second) {
            out.push_back({ItemRef{name, ItemRef::Kind::Node, scheme.name, key, 0}, item});
          }
        }
      }
      if (want_edges) {
        for (const auto& scheme : graph.edges) {
          if (filter && !filter->scheme.empty() && filter->scheme != scheme.name) continue;
          auto it = store.graph.edges.find(scheme.name);
          if (it == store.graph.edges.end()) continue;
          for (std::size_t i = 0; i < it->second.size(); ++i) {
            out.push_back(
                {ItemRef{name, ItemRef::Kind::Edge, scheme.name, Value(), i}, edge_item(it->second[i])});
          }
        }
      }
      break;
    }
  }
  count_visit(out.size());
  return out;
}

std::optional<Value> StoreSet::kv_lookup(const std::string& name, const Value& key) const {
  const ObjectStore& store = get(name);
  if (store.model != ModelType::KeyValue) {
    throw Error(ErrorCode::ModelMismatch, name + " is not a KV object");
  }
  visits_[name] += 1;
  auto it = store.pairs.find(key);
  if (it == store.pairs.end()) return std::nullopt;
  return it->second;
}

std::vector<std::pair<ItemRef, ItemRef>> StoreSet::neighbors(const std::string& name,
                                                             const Value& node_key,
                                                             const std::string& edge_scheme,
                                                             Direction direction) const {
  const ObjectStore& store = get(name);
  if (store.model != ModelType::Graph) {
    throw Error(ErrorCode::ModelMismatch, name + " is not a graph object");
  }
  const auto& graph = std::get<GraphScheme>(store.scheme);
  const EdgeScheme* scheme = graph.edge(edge_scheme);
  if (!scheme) throw Error(ErrorCode::UnknownScheme, "unknown edge scheme " + edge_scheme);

  const auto& index =
      direction == Direction::Out ? store.graph.out_index : store.graph.in_index;
  std::vector<std::pair<ItemRef, ItemRef>> out;
  auto scheme_it = index.find(edge_scheme);
  if (scheme_it == index.end()) return out;
  auto key_it = scheme_it->second.find(node_key);
  if (key_it == scheme_it->second.end()) return out;

  const auto& edges = store.graph.edges.at(edge_scheme);
  for (std::size_t ordinal : key_it->second) {
    const GraphEdgeRecord& e = edges[ordinal];
    const Value& neighbor_key = direction == Direction::Out ? e.to : e.from;
    const std::string& neighbor_scheme =
        direction == Direction::Out ? scheme->to_scheme : scheme->from_scheme;
    out.push_back({ItemRef{name, ItemRef::Kind::Edge, edge_scheme, Value(), ordinal},
                   ItemRef{name, ItemRef::Kind::Node, neighbor_scheme, neighbor_key, 0}});
  }
  visits_[name] += out.size();
  return out;
}

Value StoreSet::fetch(const ObjectStore& store, const ItemRef& ref) const {
  switch (ref.kind) {
    case ItemRef::Kind::Row:
      if (ref.ordinal >= store.rows.size()) {
        throw Error(ErrorCode::StaleRef, "row ordinal out of range");
      }
      return store.rows[ref.ordinal];
    case ItemRef::Kind::Pair: {
      auto it = store.pairs.find(ref.key);
      if (it == store.pairs.end()) throw Error(ErrorCode::StaleRef, "pair key vanished");
      auto [key_name, value_name] = kv_attr_names(store);
      Value item = Value::map();
      item.set(key_name, it->first);
      item.set(value_name, it->second);
      return item;
    }
    case ItemRef::Kind::Doc:
      if (ref.ordinal >= store.docs.size()) {
        throw Error(ErrorCode::StaleRef, "doc ordinal out of range");
      }
      return store.docs[ref.ordinal];
    case ItemRef::Kind::Node: {
      auto scheme_it = store.graph.nodes.find(ref.scheme);
      if (scheme_it == store.graph.nodes.end()) {
        throw Error(ErrorCode::StaleRef, "node scheme vanished");
      }
      auto it = scheme_it->second.find(ref.key);
      if (it == scheme_it->second.end()) throw Error(ErrorCode::StaleRef, "node key vanished");
      return it->second;
    }
    case ItemRef::Kind::Edge: {
      auto scheme_it = store.graph.edges.find(ref.scheme);
      if (scheme_it == store.graph.edges.end() || ref.ordinal >= scheme_it->second.size()) {
        throw Error(ErrorCode::StaleRef, "edge ordinal out of range");
      }
      return edge_item(scheme_it->second[ref.ordinal]);
    }
  }
  throw Error(ErrorCode::StaleRef, "unresolvable ref");
}

namespace {

void set_into(Value& item, const std::vector<std::string>& path, std::size_t at,
              const Value& value) {
  if (at + 1 == path.size()) {
    if (!item.is_map()) {
      throw Error(ErrorCode::ConformanceError, "assignment target is not a map");
    }
    item.set(path[at], value);
    return;
  }
  if (!item.is_map()) {
    throw Error(ErrorCode::ConformanceError, "assignment path crosses a non-map value");
  }
  for (auto& [k, v] : item.entries()) {
    if (k == path[at]) {
      set_into(v, path, at + 1, value);
      return;
    }
  }
  throw Error(ErrorCode::ConformanceError, "assignment path names a missing attribute " + path[at]);
}

Value apply_assignments(const Value& item, const SetAction& action) {
  Value out = item;
  for (const auto& [path, value] : action.assignments) {
    if (path.empty()) throw Error(ErrorCode::ConformanceError, "empty assignment path");
    set_into(out, path, 0, value);
  }
  return out;
}

}  // namespace

std::size_t StoreSet::apply_mutation(const std::string& name, const std::vector<ItemRef>& refs,
                                     const MutationAction& action) {
  if (refs.empty()) return 0;
  ObjectStore& live = get_mutable(name);
  ObjectStore changed = live;

  const bool deleting = std::holds_alternative<DeleteAction>(action);
  const SetAction* set_action = std::get_if<SetAction>(&action);

  if (deleting) {
    // Collect ordinals / keys per container, then erase back-to-front.
    std::vector<std::size_t> row_ordinals, doc_ordinals;
    std::map<std::string, std::vector<std::size_t>> edge_ordinals;
    std::vector<std::pair<std::string, Value>> node_keys;
    std::vector<Value> pair_keys;
    for (const auto& ref : refs) {
      fetch(changed, ref);  // throws StaleRef on bad handles
      switch (ref.kind) {
        case ItemRef::Kind::Row: row_ordinals.push_back(ref.ordinal); break;
        case ItemRef::Kind::Doc: doc_ordinals.push_back(ref.ordinal); break;
        case ItemRef::Kind::Pair: pair_keys.push_back(ref.key); break;
        case ItemRef::Kind::Node: node_keys.push_back({ref.scheme, ref.key}); break;
        case ItemRef::Kind::Edge: edge_ordinals[ref.scheme].push_back(ref.ordinal); break;
      }
    }
    std::size_t affected = refs.size();

    std::sort(row_ordinals.rbegin(), row_ordinals.rend());
    for (std::size_t i : row_ordinals) changed.rows.erase(changed.rows.begin() + i);
    std::sort(doc_ordinals.rbegin(), doc_ordinals.rend());
    for (std::size_t i : doc_ordinals) changed.docs.erase(changed.docs.begin() + i);
    for (const auto& k : pair_keys) changed.pairs.erase(k);
    for (auto& [scheme, ordinals] : edge_ordinals) {
      std::sort(ordinals.rbegin(), ordinals.rend());
      auto& list = changed.graph.edges[scheme];
      for (std::size_t i : ordinals) list.erase(list.begin() + i);
    }
    if (!node_keys.empty()) {
      const auto& graph_scheme = std::get<GraphScheme>(changed.scheme);
      for (const auto& [scheme, key] : node_keys) {
        changed.graph.nodes[scheme].erase(key);
        // Cascade: drop edges incident to the deleted node.
        for (const auto& edge_scheme : graph_scheme.edges) {
          if (edge_scheme.from_scheme != scheme && edge_scheme.to_scheme != scheme) continue;
          auto& list = changed.graph.edges[edge_scheme.name];
          auto removed = std::remove_if(list.begin(), list.end(), [&](const GraphEdgeRecord& e) {
            return (edge_scheme.from_scheme == scheme && e.from == key) ||
                   (edge_scheme.to_scheme == scheme && e.to == key);
          });
          affected += static_cast<std::size_t>(list.end() - removed);
          list.erase(removed, list.end());
        }
      }
    }
    changed.graph.rebuild_adjacency();
    validate_store(changed);
    live = std::move(changed);
    return affected;
  }

  // SET: replace each referenced item by its updated form.
  for (const auto& ref : refs) {
    Value updated = apply_assignments(fetch(changed, ref), *set_action);
    switch (ref.kind) {
      case ItemRef::Kind::Row:
        changed.rows[ref.ordinal] = std::move(updated);
        break;
      case ItemRef::Kind::Doc:
        changed.docs[ref.ordinal] = std::move(updated);
        break;
      case ItemRef::Kind::Pair: {
        auto [key_name, value_name] = kv_attr_names(changed);
        const Value* new_key = updated.find(key_name);
        const Value* new_value = updated.find(value_name);
        if (!new_key || !new_value) {
          throw Error(ErrorCode::ConformanceError, "pair item lost its key or value attribute");
        }
        changed.pairs.erase(ref.key);
        if (changed.pairs.count(*new_key)) {
          throw Error(ErrorCode::DuplicatePrimaryKey, "duplicate key " + print_value(*new_key));
        }
        changed.pairs[*new_key] = *new_value;
        break;
      }
      case ItemRef::Kind::Node: {
        const auto& graph_scheme = std::get<GraphScheme>(changed.scheme);
        const NodeScheme* node = graph_scheme.node(ref.scheme);
        const Value* new_key = updated.find(node->key_triple()->name);
        if (!new_key) {
          throw Error(ErrorCode::ConformanceError, "node item lost its key attribute");
        }
        auto& keyed = changed.graph.nodes[ref.scheme];
        if (!(*new_key == ref.key) && keyed.count(*new_key)) {
          throw Error(ErrorCode::DuplicatePrimaryKey,
                      "duplicate node key " + print_value(*new_key));
        }
        keyed.erase(ref.key);
        keyed[*new_key] = std::move(updated);
        break;
      }
      case ItemRef::Kind::Edge: {
        auto& list = changed.graph.edges[ref.scheme];
        GraphEdgeRecord record;
        const Value* from = updated.find("FROM");
        const Value* to = updated.find("TO");
        if (!from || !to) {
          throw Error(ErrorCode::ConformanceError, "edge item lost FROM or TO");
        }
        record.from = *from;
        record.to = *to;
        record.properties = Value::map();
        for (const auto& [k, v] : updated.entries()) {
          if (k != "FROM" && k != "TO") record.properties.set(k, v);
        }
        list[ref.ordinal] = std::move(record);
        break;
      }
    }
  }
  changed.graph.rebuild_adjacency();
  validate_store(changed);
  live = std::move(changed);
  return refs.size();
}

std::size_t StoreSet::visit_count(const std::string& name) const {
  auto it = visits_.find(name);
  return it == visits_.end() ? 0 : it->second;
}

void StoreSet::validate_store(const ObjectStore& store) const {
  switch (store.model) {
    case ModelType::Relation: {
      const auto& rel = std::get<RelationalScheme>(store.scheme);
      auto fragments = relational_fragments(rel);
      std::set<Value, ValueLess> keys;
      const Triple* pk = rel.primary_column();
      for (const auto& row : store.rows) {
        conformance_or_throw(conforms_fragments(row, fragments));
        if (pk) {
          const Value* key = row.find(pk->name);
          if (key && !keys.insert(*key).second) {
            throw Error(ErrorCode::DuplicatePrimaryKey,
                        "duplicate PRIMARY value " + print_value(*key));
          }
        }
      }
      return;
    }
    case ModelType::KeyValue: {
      const auto& kv = std::get<KeyValueScheme>(store.scheme);
      for (const auto& [k, v] : store.pairs) {
        Value item = Value::map();
        item.set(kv.key.name, k);
        item.set(kv.value.name, v);
        conformance_or_throw(conforms_fragments(item, kv_fragments(kv)));
      }
      return;
    }
    case ModelType::Document: {
      const auto& doc = std::get<DocumentScheme>(store.scheme);
      for (const auto& d : store.docs) conformance_or_throw(conforms_fragments(d, doc.root));
      return;
    }
    case ModelType::Graph: {
      const auto& graph = std::get<GraphScheme>(store.scheme);
      for (const auto& node : graph.nodes) {
        auto it = store.graph.nodes.find(node.name);
        if (it == store.graph.nodes.end()) continue;
        for (const auto& [key, item] : it->second) {
          conformance_or_throw(conforms_fragments(item, node.properties));
          const Value* declared = item.find(node.key_triple()->name);
          if (!declared || !(*declared == key)) {
            throw Error(ErrorCode::ConformanceError,
                        "node key attribute differs from its index key");
          }
        }
      }
      for (const auto& edge : graph.edges) {
        auto it = store.graph.edges.find(edge.name);
        if (it == store.graph.edges.end()) continue;
        const auto& from_nodes = store.graph.nodes.at(edge.from_scheme);
        const auto& to_nodes = store.graph.nodes.at(edge.to_scheme);
        for (const auto& record : it->second) {
          conformance_or_throw(conforms_fragments(record.properties, edge.properties));
          if (!from_nodes.count(record.from) || !to_nodes.count(record.to)) {
            throw Error(ErrorCode::DanglingEdge, "edge endpoint no longer exists");
          }
        }
      }
      return;
    }
  }
}

}  // namespace msql
