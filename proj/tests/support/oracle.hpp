// Test-side oracles. These deliberately re-derive semantics from first
// principles (own comparator, regex-based LIKE, brute-force argmin) so they
// stay independent of the render/parse/evaluate path they are checking.
#pragma once

#include <algorithm>
#include <map>
#include <regex>
#include <string>
#include <vector>

#include "mstore/placement.hpp"
#include "mstore/query.hpp"

namespace oracle {

using RowMap = std::map<std::string, mstore::Value>;

// Total order: null first, numbers numerically, text bytewise, dates
// chronologically, false before true.
inline int compare(const mstore::Value& a, const mstore::Value& b) {
  using mstore::ValueKind;
  if (a.is_null() && b.is_null()) return 0;
  if (a.is_null()) return -1;
  if (b.is_null()) return 1;
  auto num = [](const mstore::Value& v) {
    return v.kind() == ValueKind::integer ? static_cast<long double>(v.as_integer())
                                          : static_cast<long double>(v.as_floating());
  };
  bool a_num = a.kind() == ValueKind::integer || a.kind() == ValueKind::floating;
  bool b_num = b.kind() == ValueKind::integer || b.kind() == ValueKind::floating;
  if (a_num && b_num) {
    long double x = num(a), y = num(b);
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  switch (a.kind()) {
    case ValueKind::text: {
      int c = a.as_text().compare(b.as_text());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case ValueKind::date: {
      auto ta = std::tuple(a.as_date().year, a.as_date().month, a.as_date().day);
      auto tb = std::tuple(b.as_date().year, b.as_date().month, b.as_date().day);
      return ta < tb ? -1 : (ta > tb ? 1 : 0);
    }
    case ValueKind::boolean:
      return int(a.as_boolean()) - int(b.as_boolean());
    default:
      return 0;
  }
}

inline bool like(const std::string& pattern, const std::string& text) {
  std::string rx;
  for (char c : pattern) {
    if (c == '%') {
      rx += ".*";
    } else if (c == '_') {
      rx += '.';
    } else if (std::string("\\^$.|?*+()[]{}").find(c) != std::string::npos) {
      rx += '\\';
      rx += c;
    } else {
      rx += c;
    }
  }
  return std::regex_match(text, std::regex(rx));
}

// Direct recursive evaluation of the filter tree over one row.
inline bool eval_filter(const mstore::FilterExpr& f, const RowMap& row) {
  using Kind = mstore::FilterExpr::Kind;
  switch (f.node) {
    case Kind::always_true:
      return true;
    case Kind::comparison: {
      const mstore::Value& v = row.at(f.field);
      if (f.literal.is_null())
        return f.op == mstore::CompareOp::eq ? v.is_null() : !v.is_null();
      if (v.is_null()) return false;
      if (f.op == mstore::CompareOp::like) return like(f.literal.as_text(), v.as_text());
      int c = compare(v, f.literal);
      switch (f.op) {
        case mstore::CompareOp::eq: return c == 0;
        case mstore::CompareOp::neq: return c != 0;
        case mstore::CompareOp::lt: return c < 0;
        case mstore::CompareOp::le: return c <= 0;
        case mstore::CompareOp::gt: return c > 0;
        case mstore::CompareOp::ge: return c >= 0;
        default: return false;
      }
    }
    case Kind::conjunction:
      for (const auto& c : f.children)
        if (!eval_filter(c, row)) return false;
      return true;
    case Kind::disjunction:
      for (const auto& c : f.children)
        if (eval_filter(c, row)) return true;
      return false;
    case Kind::negation:
      return !eval_filter(f.children.front(), row);
  }
  return false;
}

// filter, then stable sort, then offset/limit — the reference semantics for
// any SELECT, single store or merged.
inline std::vector<RowMap> select(const std::vector<RowMap>& rows,
                                  const mstore::QueryOptions& options) {
  std::vector<RowMap> out;
  for (const auto& row : rows)
    if (eval_filter(options.filter, row)) out.push_back(row);
  std::stable_sort(out.begin(), out.end(), [&](const RowMap& a, const RowMap& b) {
    for (const auto& s : options.sorts) {
      int c = compare(a.at(s.field), b.at(s.field));
      if (c != 0) return s.direction == mstore::SortDirection::asc ? c < 0 : c > 0;
    }
    return false;
  });
  if (options.offset) {
    auto skip = std::min<std::size_t>(out.size(), std::size_t(*options.offset));
    out.erase(out.begin(), out.begin() + std::ptrdiff_t(skip));
  }
  if (options.limit && out.size() > std::size_t(*options.limit)) out.resize(std::size_t(*options.limit));
  return out;
}

// Brute-force argmin with the formula recomputed inline.
inline mstore::LocationId choose(const mstore::EntityDescriptor& entity,
                                 const mstore::SchemaRegistry& registry, std::int64_t payload,
                                 const std::map<mstore::LocationId, mstore::StoreMetrics>& metrics,
                                 const mstore::PolicyWeights& weights) {
  mstore::LocationId best;
  double best_cost = 0;
  bool found = false;
  for (const auto& [location, m] : metrics) {
    if (entity.confidentiality == mstore::Confidentiality::private_only &&
        registry.store(location).privacy != mstore::StorePrivacy::private_cloud)
      continue;
    double cost = double(payload) / m.bandwidth + weights.w_load * m.server_load +
                  weights.w_clients * double(m.active_clients) + m.latency_ewma;
    if (!found || cost < best_cost || (cost == best_cost && location < best)) {
      best = location;
      best_cost = cost;
      found = true;
    }
  }
  return found ? best : mstore::LocationId{};
}

}  // namespace oracle
