#pragma once

#include <memory>
#include <mutex>

#include "mstore/query.hpp"

namespace mstore {

// Values aligned to the entity's declared field order.
using Row = std::vector<Value>;

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

// SELECT carries rows; INSERT/UPDATE/DELETE carry an affected count.
struct ExecResult {
  std::optional<ResultSet> rows;
  std::int64_t affected = 0;

  bool is_select() const { return rows.has_value(); }
};

struct Measurement {
  ExecResult result;
  double latency_seconds = 0.0;
  std::size_t payload_bytes = 0;
};

// One embedded store: a table per registered entity, rows kept in insertion
// order (the basis for stable sorting). Statements are interpreted directly;
// only the artifact dialect is understood. Requests against the same handle
// are serialized; distinct handles are independent.
class StoreHandle {
 public:
  const LocationId& location() const { return location_; }
  bool is_open() const;
  void close();

  // Failed statements leave the store untouched.
  ExecResult execute(const Statement& statement);
  ExecResult execute_raw(const std::string& text, const std::vector<Value>& params);

  // Same result as execute, plus observed latency (the injected delay when
  // one is configured, otherwise wall time) and the payload size of params
  // plus the result under the fixed serialization rule.
  Measurement measure(const Statement& statement);

  void set_injected_delay(std::optional<double> seconds);
  std::optional<double> injected_delay() const;

  std::size_t row_count(std::string_view entity) const;
  std::vector<Row> table_rows(std::string_view entity) const;

  // Stable text dump of every table, for debugging and state comparison.
  std::string snapshot() const;

  const SchemaRegistry& registry() const { return *registry_; }

 private:
  friend std::unique_ptr<StoreHandle> open_store(const SchemaRegistry&, const LocationId&);
  StoreHandle(const SchemaRegistry& registry, LocationId location);

  ExecResult run(const std::string& text, const std::vector<Value>& params);
  std::vector<Row>& table(std::string_view entity);

  const SchemaRegistry* registry_;  // must outlive the handle
  LocationId location_;
  std::vector<std::pair<std::string, std::vector<Row>>> tables_;  // entity declaration order
  bool open_ = true;
  std::optional<double> injected_delay_;
  mutable std::mutex mu_;
};

// Registry must contain `location` and it must be an embedded store; the
// handle starts with one empty table per registered entity.
std::unique_ptr<StoreHandle> open_store(const SchemaRegistry& registry, const LocationId& location);

// SQL LIKE with `%` and `_` wildcards, case-sensitive, no escape syntax.
bool like_match(std::string_view pattern, std::string_view text);

}  // namespace mstore
