#include "msql/value.hpp"

#include <algorithm>
#include <stdexcept>

#include "msql/error.hpp"

namespace msql {

Value Value::map(std::vector<MapEntry> entries) {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      if (entries[i].first == entries[j].first) {
        throw std::logic_error("duplicate map key: " + entries[i].first);
      }
    }
  }
  Value v;
  v.kind_ = Kind::Map;
  v.map_ = std::move(entries);
  return v;
}

const Value* Value::find(const std::string& key) const {
  if (kind_ != Kind::Map) return nullptr;
  for (const auto& [k, v] : map_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void Value::set(const std::string& key, Value v) {
  if (kind_ != Kind::Map) {
    kind_ = Kind::Map;
    map_.clear();
  }
  for (auto& [k, existing] : map_) {
    if (k == key) {
      existing = std::move(v);
      return;
    }
  }
  map_.emplace_back(key, std::move(v));
}

bool Value::erase(const std::string& key) {
  if (kind_ != Kind::Map) return false;
  for (auto it = map_.begin(); it != map_.end(); ++it) {
    if (it->first == key) {
      map_.erase(it);
      return true;
    }
  }
  return false;
}

bool Value::operator==(const Value& other) const {
  return compare_values(*this, other) == Ordering::Equal;
}

namespace {

int kind_rank(Value::Kind k) {
  switch (k) {
    case Value::Kind::Null: return 0;
    case Value::Kind::Bool: return 1;
    case Value::Kind::Int: return 2;
    case Value::Kind::Str: return 3;
    case Value::Kind::List: return 4;
    case Value::Kind::Map: return 5;
  }
  return 6;
}

Ordering order_of(int cmp) {
  if (cmp < 0) return Ordering::Less;
  if (cmp > 0) return Ordering::Greater;
  return Ordering::Equal;
}

std::vector<const Value::MapEntry*> sorted_entries(const Value& m) {
  std::vector<const Value::MapEntry*> out;
  out.reserve(m.entries().size());
  for (const auto& e : m.entries()) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const Value::MapEntry* a, const Value::MapEntry* b) { return a->first < b->first; });
  return out;
}

}  // namespace

Ordering compare_values(const Value& a, const Value& b) {
  int ra = kind_rank(a.kind());
  int rb = kind_rank(b.kind());
  if (ra != rb) return ra < rb ? Ordering::Less : Ordering::Greater;
  switch (a.kind()) {
    case Value::Kind::Null:
      return Ordering::Equal;
    case Value::Kind::Bool:
      if (a.as_bool() == b.as_bool()) return Ordering::Equal;
      return a.as_bool() ? Ordering::Greater : Ordering::Less;
    case Value::Kind::Int:
      if (a.as_int() == b.as_int()) return Ordering::Equal;
      return a.as_int() < b.as_int() ? Ordering::Less : Ordering::Greater;
    case Value::Kind::Str:
      return order_of(a.as_str().compare(b.as_str()));
    case Value::Kind::List: {
      const auto& xs = a.elements();
      const auto& ys = b.elements();
      std::size_t n = std::min(xs.size(), ys.size());
      for (std::size_t i = 0; i < n; ++i) {
        Ordering o = compare_values(xs[i], ys[i]);
        if (o != Ordering::Equal) return o;
      }
      if (xs.size() == ys.size()) return Ordering::Equal;
      return xs.size() < ys.size() ? Ordering::Less : Ordering::Greater;
    }
    case Value::Kind::Map: {
      auto xs = sorted_entries(a);
      auto ys = sorted_entries(b);
      std::size_t n = std::min(xs.size(), ys.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = xs[i]->first.compare(ys[i]->first);
        if (c != 0) return order_of(c);
      }
      if (xs.size() != ys.size()) {
        return xs.size() < ys.size() ? Ordering::Less : Ordering::Greater;
      }
      for (std::size_t i = 0; i < n; ++i) {
        Ordering o = compare_values(xs[i]->second, ys[i]->second);
        if (o != Ordering::Equal) return o;
      }
      return Ordering::Equal;
    }
  }
  return Ordering::Equal;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  auto head = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!tail(s[i])) return false;
  }
  return true;
}

std::string escape_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string print_value(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Null: return "NULL";
    case Value::Kind::Bool: return v.as_bool() ? "TRUE" : "FALSE";
    case Value::Kind::Int: return std::to_string(v.as_int());
    case Value::Kind::Str: return escape_string(v.as_str());
    case Value::Kind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.elements().size(); ++i) {
        if (i) out += ", ";
        out += print_value(v.elements()[i]);
      }
      out += "]";
      return out;
    }
    case Value::Kind::Map: {
      std::vector<const Value::MapEntry*> sorted;
      for (const auto& e : v.entries()) sorted.push_back(&e);
      std::sort(sorted.begin(), sorted.end(),
                [](const Value::MapEntry* a, const Value::MapEntry* b) { return a->first < b->first; });
      std::string out = "{";
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ", ";
        const auto& key = sorted[i]->first;
        out += is_identifier(key) ? key : escape_string(key);
        out += ": ";
        out += print_value(sorted[i]->second);
      }
      out += "}";
      return out;
    }
  }
  return "NULL";
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::LexError: return "LexError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnknownObject: return "UnknownObject";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::AlreadyInitialized: return "AlreadyInitialized";
    case ErrorCode::SchemeInvalid: return "SchemeInvalid";
    case ErrorCode::NotInitialized: return "NotInitialized";
    case ErrorCode::ConformanceError: return "ConformanceError";
    case ErrorCode::DuplicatePrimaryKey: return "DuplicatePrimaryKey";
    case ErrorCode::DanglingEdge: return "DanglingEdge";
    case ErrorCode::UnknownScheme: return "UnknownScheme";
    case ErrorCode::StaleRef: return "StaleRef";
    case ErrorCode::UnresolvableObject: return "UnresolvableObject";
    case ErrorCode::UnresolvableAttribute: return "UnresolvableAttribute";
    case ErrorCode::AmbiguousAttribute: return "AmbiguousAttribute";
    case ErrorCode::UnknownFilter: return "UnknownFilter";
    case ErrorCode::DuplicateFilterName: return "DuplicateFilterName";
    case ErrorCode::ReservedName: return "ReservedName";
    case ErrorCode::CrossObjectPredicateInSelect: return "CrossObjectPredicateInSelect";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::TransferIllegal: return "TransferIllegal";
    case ErrorCode::NotEmpty: return "NotEmpty";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Error";
}

std::string violations_to_string(const std::vector<Violation>& violations) {
  std::string out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out += "; ";
    if (!violations[i].path.empty()) {
      out += violations[i].path;
      out += ": ";
    }
    out += violations[i].message;
  }
  return out;
}

}  // namespace msql
