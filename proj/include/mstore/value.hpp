#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mstore/errors.hpp"

namespace mstore {

enum class ValueKind { integer, floating, text, date, boolean, null };

const char* value_kind_name(ValueKind kind);
std::optional<ValueKind> value_kind_from_name(std::string_view name);

// Calendar date, ISO-8601 `YYYY-MM-DD`. Only real dates construct.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static Date parse(std::string_view iso);  // throws invalid_argument on bad input
  static bool valid(int year, int month, int day);
  std::string to_string() const;

  friend auto operator<=>(const Date&, const Date&) = default;
};

// Tagged scalar. Floats must be finite; comparisons never coerce between
// kinds except Integer<->Float, which compare numerically.
class Value {
 public:
  Value() : v_(std::monostate{}) {}

  static Value null() { return Value(); }
  static Value integer(std::int64_t v);
  static Value floating(double v);  // throws type_mismatch on non-finite
  static Value text(std::string v);
  static Value date(Date v);
  static Value date(std::string_view iso);
  static Value boolean(bool v);

  ValueKind kind() const;
  bool is_null() const { return std::holds_alternative<std::monostate>(v_); }

  std::int64_t as_integer() const;
  double as_floating() const;
  const std::string& as_text() const;
  const Date& as_date() const;
  bool as_boolean() const;

  // Debug/report rendering; deterministic across platforms.
  std::string to_string() const;

  // Structural equality: Integer(1) != Float(1.0).
  bool operator==(const Value&) const = default;

 private:
  std::variant<std::monostate, std::int64_t, double, std::string, Date, bool> v_;
};

// Total order used for sorting and comparison evaluation: Null sorts before
// everything, Integer and Float compare numerically, otherwise kinds must
// match (type_mismatch if not). Returns <0, 0 or >0.
int compare_values(const Value& a, const Value& b);

// True when a comparison operator may relate the two kinds (null excluded).
bool comparable_kinds(ValueKind a, ValueKind b);

// Fixed telemetry serialization rule: 8 bytes per Integer/Float/Date/Boolean,
// UTF-8 byte length per Text, 1 byte per Null.
std::size_t serialized_size(const Value& v);
std::size_t serialized_size(const std::vector<Value>& values);

}  // namespace mstore
