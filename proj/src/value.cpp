#include "mstore/value.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace mstore {

const char* value_kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::integer: return "integer";
    case ValueKind::floating: return "float";
    case ValueKind::text: return "text";
    case ValueKind::date: return "date";
    case ValueKind::boolean: return "boolean";
    case ValueKind::null: return "null";
  }
  return "?";
}

std::optional<ValueKind> value_kind_from_name(std::string_view name) {
  if (name == "integer") return ValueKind::integer;
  if (name == "float") return ValueKind::floating;
  if (name == "text") return ValueKind::text;
  if (name == "date") return ValueKind::date;
  if (name == "boolean") return ValueKind::boolean;
  return std::nullopt;
}

bool Date::valid(int year, int month, int day) {
  if (year < 0 || year > 9999 || month < 1 || month > 12 || day < 1) return false;
  static constexpr std::array<int, 12> days = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int max_day = days[static_cast<std::size_t>(month - 1)];
  bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  if (month == 2 && leap) max_day = 29;
  return day <= max_day;
}

Date Date::parse(std::string_view iso) {
  auto fail = [&] { throw Error(Errc::invalid_argument, "bad date: '" + std::string(iso) + "'"); };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') fail();
  auto digits = [&](std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail();
  };
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
    if (iso[i] < '0' || iso[i] > '9') fail();
  Date d;
  digits(iso.substr(0, 4), d.year);
  digits(iso.substr(5, 2), d.month);
  digits(iso.substr(8, 2), d.day);
  if (!valid(d.year, d.month, d.day)) fail();
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

Value Value::integer(std::int64_t v) {
  Value out;
  out.v_ = v;
  return out;
}

Value Value::floating(double v) {
  if (!std::isfinite(v)) throw Error(Errc::type_mismatch, "non-finite float value");
  Value out;
  out.v_ = v;
  return out;
}

Value Value::text(std::string v) {
  Value out;
  out.v_ = std::move(v);
  return out;
}

Value Value::date(Date v) {
  if (!Date::valid(v.year, v.month, v.day))
    throw Error(Errc::invalid_argument, "invalid date value");
  Value out;
  out.v_ = v;
  return out;
}

Value Value::date(std::string_view iso) { return date(Date::parse(iso)); }

Value Value::boolean(bool v) {
  Value out;
  out.v_ = v;
  return out;
}

ValueKind Value::kind() const {
  switch (v_.index()) {
    case 0: return ValueKind::null;
    case 1: return ValueKind::integer;
    case 2: return ValueKind::floating;
    case 3: return ValueKind::text;
    case 4: return ValueKind::date;
    default: return ValueKind::boolean;
  }
}

namespace {

[[noreturn]] void wrong_kind(const char* want, ValueKind got) {
  throw Error(Errc::type_mismatch,
              std::string("expected ") + want + ", have " + value_kind_name(got));
}

}  // namespace

std::int64_t Value::as_integer() const {
  if (auto* p = std::get_if<std::int64_t>(&v_)) return *p;
  wrong_kind("integer", kind());
}

double Value::as_floating() const {
  if (auto* p = std::get_if<double>(&v_)) return *p;
  wrong_kind("float", kind());
}

const std::string& Value::as_text() const {
  if (auto* p = std::get_if<std::string>(&v_)) return *p;
  wrong_kind("text", kind());
}

const Date& Value::as_date() const {
  if (auto* p = std::get_if<Date>(&v_)) return *p;
  wrong_kind("date", kind());
}

bool Value::as_boolean() const {
  if (auto* p = std::get_if<bool>(&v_)) return *p;
  wrong_kind("boolean", kind());
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::null: return "NULL";
    case ValueKind::integer: return std::to_string(as_integer());
    case ValueKind::floating: {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, as_floating());
      (void)ec;
      return std::string(buf, ptr);
    }
    case ValueKind::text: return "'" + as_text() + "'";
    case ValueKind::date: return as_date().to_string();
    case ValueKind::boolean: return as_boolean() ? "true" : "false";
  }
  return "?";
}

namespace {

bool numeric(ValueKind k) { return k == ValueKind::integer || k == ValueKind::floating; }

int sign(long double d) { return d < 0 ? -1 : (d > 0 ? 1 : 0); }

}  // namespace

int compare_values(const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) {
    if (a.is_null() && b.is_null()) return 0;
    return a.is_null() ? -1 : 1;
  }
  ValueKind ka = a.kind(), kb = b.kind();
  if (numeric(ka) && numeric(kb)) {
    // long double holds int64 exactly on x86-64
    long double x = ka == ValueKind::integer ? static_cast<long double>(a.as_integer())
                                             : static_cast<long double>(a.as_floating());
    long double y = kb == ValueKind::integer ? static_cast<long double>(b.as_integer())
                                             : static_cast<long double>(b.as_floating());
    return sign(x - y);
  }
  if (ka != kb)
    throw Error(Errc::type_mismatch, std::string("cannot compare ") + value_kind_name(ka) +
                                         " with " + value_kind_name(kb));
  switch (ka) {
    case ValueKind::text: {
      int c = a.as_text().compare(b.as_text());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ValueKind::date: {
      auto c = a.as_date() <=> b.as_date();
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ValueKind::boolean: return static_cast<int>(a.as_boolean()) - static_cast<int>(b.as_boolean());
    default: return 0;  // unreachable
  }
}

bool comparable_kinds(ValueKind a, ValueKind b) {
  if (a == ValueKind::null || b == ValueKind::null) return false;
  if (numeric(a) && numeric(b)) return true;
  return a == b;
}

std::size_t serialized_size(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null: return 1;
    case ValueKind::text: return v.as_text().size();
    default: return 8;
  }
}

std::size_t serialized_size(const std::vector<Value>& values) {
  std::size_t total = 0;
  for (const auto& v : values) total += serialized_size(v);
  return total;
}

}  // namespace mstore
