#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "mstore/schema.hpp"

namespace mstore {

enum class CompareOp { eq, neq, lt, le, gt, ge, like };

const char* compare_op_symbol(CompareOp op);

// Filter tree. Field existence and operand kinds are checked when a
// statement is built, not at construction time.
struct FilterExpr {
  enum class Kind { always_true, comparison, conjunction, disjunction, negation };

  Kind node = Kind::always_true;
  // comparison payload
  std::string field;
  CompareOp op = CompareOp::eq;
  Value literal;
  // conjunction / disjunction / negation payload
  std::vector<FilterExpr> children;

  bool is_true() const { return node == Kind::always_true; }
};

namespace filters {

inline FilterExpr always() { return {}; }
FilterExpr cmp(std::string field, CompareOp op, Value literal);
FilterExpr eq(std::string field, Value literal);
FilterExpr neq(std::string field, Value literal);
FilterExpr lt(std::string field, Value literal);
FilterExpr le(std::string field, Value literal);
FilterExpr gt(std::string field, Value literal);
FilterExpr ge(std::string field, Value literal);
FilterExpr like(std::string field, std::string pattern);
FilterExpr all_of(std::vector<FilterExpr> children);  // AND; empty list is true
FilterExpr any_of(std::vector<FilterExpr> children);  // OR; empty list is false
FilterExpr negate(FilterExpr child);

}  // namespace filters

enum class SortDirection { asc, desc };

struct SortSpec {
  std::string field;
  SortDirection direction = SortDirection::asc;
};

struct QueryOptions {
  FilterExpr filter;  // defaults to the identity filter
  std::vector<SortSpec> sorts;
  std::optional<std::int64_t> limit;   // non-negative
  std::optional<std::int64_t> offset;  // non-negative; permitted without limit
};

// Generated statement text plus positional `?` parameters. All user values
// flow through params; the text never embeds a literal.
struct Statement {
  std::string text;
  std::vector<Value> params;
};

struct RenderedFilter {
  std::optional<std::string> clause;  // absent when the filter is the identity
  std::vector<Value> params;
};

// Fully parenthesized WHERE clause; param order is left-to-right comparison
// order. The identity filter renders as an absent clause at top level and as
// `(1=1)` when nested under an operator.
RenderedFilter render_filter(const EntityDescriptor& entity, const FilterExpr& filter);

Statement build_select(const SchemaRegistry& registry, std::string_view entity,
                       const QueryOptions& options = {});
Statement build_insert(const SchemaRegistry& registry, std::string_view entity,
                       const std::map<std::string, Value>& values);
Statement build_update(const SchemaRegistry& registry, std::string_view entity,
                       const std::map<std::string, Value>& changes, const FilterExpr& filter);
Statement build_delete(const SchemaRegistry& registry, std::string_view entity,
                       const FilterExpr& filter);

}  // namespace mstore
