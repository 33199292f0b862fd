#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace msql {

/// The value space: integers, finite strings, booleans, null, lists and
/// maps with distinct string keys. Maps remember insertion order; equality
/// and ordering are key-sorted so two maps with the same entries compare
/// equal regardless of construction order.
class Value {
 public:
  enum class Kind { Null, Bool, Int, Str, List, Map };

  using MapEntry = std::pair<std::string, Value>;

  Value() : kind_(Kind::Null) {}

  static Value null() { return Value(); }
  static Value boolean(bool b) {
    Value v;
    v.kind_ = Kind::Bool;
    v.bool_ = b;
    return v;
  }
  static Value integer(std::int64_t i) {
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = i;
    return v;
  }
  static Value str(std::string s) {
    Value v;
    v.kind_ = Kind::Str;
    v.str_ = std::move(s);
    return v;
  }
  static Value list(std::vector<Value> elems = {}) {
    Value v;
    v.kind_ = Kind::List;
    v.list_ = std::move(elems);
    return v;
  }
  /// Keys must be pairwise distinct; duplicate keys are a programming error
  /// and are rejected with an assertion-style throw.
  static Value map(std::vector<MapEntry> entries = {});

  Kind kind() const { return kind_; }
  bool is_null() const { return kind_ == Kind::Null; }
  bool is_bool() const { return kind_ == Kind::Bool; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_str() const { return kind_ == Kind::Str; }
  bool is_list() const { return kind_ == Kind::List; }
  bool is_map() const { return kind_ == Kind::Map; }

  bool as_bool() const { return bool_; }
  std::int64_t as_int() const { return int_; }
  const std::string& as_str() const { return str_; }
  const std::vector<Value>& elements() const { return list_; }
  std::vector<Value>& elements() { return list_; }
  const std::vector<MapEntry>& entries() const { return map_; }
  std::vector<MapEntry>& entries() { return map_; }

  /// Map access by key; nullptr when absent or not a map.
  const Value* find(const std::string& key) const;
  bool has_key(const std::string& key) const { return find(key) != nullptr; }
  /// Inserts or replaces a map entry (insertion order kept for new keys).
  void set(const std::string& key, Value v);
  bool erase(const std::string& key);

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }

 private:
  Kind kind_;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::string str_;
  std::vector<Value> list_;
  std::vector<MapEntry> map_;
};

enum class Ordering { Less, Equal, Greater };

/// Total order over all values. Same-kind scalars compare naturally (ints
/// numeric, strings byte-wise, false < true); across kinds the rank is
/// Null < Bool < Int < Str < List < Map. Lists compare lexicographically,
/// maps by sorted key list and then per-key values.
Ordering compare_values(const Value& a, const Value& b);

struct ValueLess {
  bool operator()(const Value& a, const Value& b) const {
    return compare_values(a, b) == Ordering::Less;
  }
};

/// Canonical text form: NULL, TRUE/FALSE, decimal ints, strings double-quoted
/// with \" \\ \n \t \r escapes, [v, ...] lists, {k: v, ...} maps with keys
/// sorted byte-wise. Identifier-shaped keys print bare, others quoted.
std::string print_value(const Value& v);

std::string escape_string(const std::string& s);
bool is_identifier(const std::string& s);

}  // namespace msql
