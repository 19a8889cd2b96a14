#include "mstore/query.hpp"

namespace mstore {

const char* compare_op_symbol(CompareOp op) {
  switch (op) {
    case CompareOp::eq: return "=";
    case CompareOp::neq: return "<>";
    case CompareOp::lt: return "<";
    case CompareOp::le: return "<=";
    case CompareOp::gt: return ">";
    case CompareOp::ge: return ">=";
    case CompareOp::like: return "LIKE";
  }
  return "?";
}

namespace filters {

FilterExpr cmp(std::string field, CompareOp op, Value literal) {
  FilterExpr f;
  f.node = FilterExpr::Kind::comparison;
  f.field = std::move(field);
  f.op = op;
  f.literal = std::move(literal);
  return f;
}

FilterExpr eq(std::string field, Value literal) { return cmp(std::move(field), CompareOp::eq, std::move(literal)); }
FilterExpr neq(std::string field, Value literal) { return cmp(std::move(field), CompareOp::neq, std::move(literal)); }
FilterExpr lt(std::string field, Value literal) { return cmp(std::move(field), CompareOp::lt, std::move(literal)); }
FilterExpr le(std::string field, Value literal) { return cmp(std::move(field), CompareOp::le, std::move(literal)); }
FilterExpr gt(std::string field, Value literal) { return cmp(std::move(field), CompareOp::gt, std::move(literal)); }
FilterExpr ge(std::string field, Value literal) { return cmp(std::move(field), CompareOp::ge, std::move(literal)); }

FilterExpr like(std::string field, std::string pattern) {
  return cmp(std::move(field), CompareOp::like, Value::text(std::move(pattern)));
}

FilterExpr all_of(std::vector<FilterExpr> children) {
  FilterExpr f;
  f.node = FilterExpr::Kind::conjunction;
  f.children = std::move(children);
  return f;
}

FilterExpr any_of(std::vector<FilterExpr> children) {
  FilterExpr f;
  f.node = FilterExpr::Kind::disjunction;
  f.children = std::move(children);
  return f;
}

FilterExpr negate(FilterExpr child) {
  FilterExpr f;
  f.node = FilterExpr::Kind::negation;
  f.children.push_back(std::move(child));
  return f;
}

}  // namespace filters

namespace {

void check_comparison(const EntityDescriptor& entity, const FilterExpr& cmp) {
  const auto& field = entity.field(cmp.field);
  if (cmp.op == CompareOp::like) {
    if (field.kind != ValueKind::text)
      throw Error(Errc::type_mismatch, "LIKE needs a text field, '" + field.name + "' is " +
                                           value_kind_name(field.kind));
    if (cmp.literal.kind() != ValueKind::text)
      throw Error(Errc::type_mismatch, "LIKE pattern must be text");
    return;
  }
  if (cmp.literal.is_null()) {
    // only equality renders against NULL (IS NULL / IS NOT NULL)
    if (cmp.op != CompareOp::eq && cmp.op != CompareOp::neq)
      throw Error(Errc::type_mismatch,
                  "ordering comparison against NULL on field '" + field.name + "'");
    return;
  }
  if (!comparable_kinds(field.kind, cmp.literal.kind()))
    throw Error(Errc::type_mismatch, "field '" + field.name + "' is " + value_kind_name(field.kind) +
                                         ", literal is " + value_kind_name(cmp.literal.kind()));
}

// nested=false only at the top of the tree, where the identity filter means
// "no clause" instead of `(1=1)`
void render_node(const EntityDescriptor& entity, const FilterExpr& f, std::string& text,
                 std::vector<Value>& params) {
  switch (f.node) {
    case FilterExpr::Kind::always_true:
      text += "(1=1)";
      return;
    case FilterExpr::Kind::comparison: {
      check_comparison(entity, f);
      if (f.literal.is_null() && f.op != CompareOp::like) {
        text += f.field;
        text += f.op == CompareOp::eq ? " IS NULL" : " IS NOT NULL";
        return;
      }
      text += f.field;
      text += ' ';
      text += compare_op_symbol(f.op);
      text += " ?";
      params.push_back(f.literal);
      return;
    }
    case FilterExpr::Kind::conjunction:
    case FilterExpr::Kind::disjunction: {
      if (f.children.empty()) {
        // empty conjunction is vacuously true, empty disjunction vacuously false
        text += f.node == FilterExpr::Kind::conjunction ? "(1=1)" : "(1=0)";
        return;
      }
      const char* joiner = f.node == FilterExpr::Kind::conjunction ? " AND " : " OR ";
      text += '(';
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i > 0) text += joiner;
        render_node(entity, f.children[i], text, params);
      }
      text += ')';
      return;
    }
    case FilterExpr::Kind::negation:
      text += "(NOT ";
      render_node(entity, f.children.front(), text, params);
      text += ')';
      return;
  }
}

void append_where(const EntityDescriptor& entity, const FilterExpr& filter, std::string& text,
                  std::vector<Value>& params) {
  auto rendered = render_filter(entity, filter);
  if (rendered.clause) {
    text += " WHERE ";
    text += *rendered.clause;
    for (auto& p : rendered.params) params.push_back(std::move(p));
  }
}

std::int64_t checked_count(std::optional<std::int64_t> v, const char* what) {
  if (*v < 0) throw Error(Errc::invalid_argument, std::string(what) + " must be non-negative");
  return *v;
}

}  // namespace

RenderedFilter render_filter(const EntityDescriptor& entity, const FilterExpr& filter) {
  RenderedFilter out;
  if (filter.is_true()) return out;
  std::string text;
  render_node(entity, filter, text, out.params);
  out.clause = std::move(text);
  return out;
}

Statement build_select(const SchemaRegistry& registry, std::string_view entity_name,
                       const QueryOptions& options) {
  const auto& entity = registry.entity(entity_name);
  Statement stmt;
  stmt.text = "SELECT ";
  for (std::size_t i = 0; i < entity.fields.size(); ++i) {
    if (i > 0) stmt.text += ", ";
    stmt.text += entity.fields[i].name;
  }
  stmt.text += " FROM ";
  stmt.text += entity.name;
  append_where(entity, options.filter, stmt.text, stmt.params);
  if (!options.sorts.empty()) {
    stmt.text += " ORDER BY ";
    for (std::size_t i = 0; i < options.sorts.size(); ++i) {
      const auto& s = options.sorts[i];
      entity.field(s.field);  // UnknownField check
      if (i > 0) stmt.text += ", ";
      stmt.text += s.field;
      stmt.text += s.direction == SortDirection::asc ? " ASC" : " DESC";
    }
  }
  if (options.limit) {
    stmt.text += " LIMIT ?";
    stmt.params.push_back(Value::integer(checked_count(options.limit, "limit")));
  }
  if (options.offset) {
    stmt.text += " OFFSET ?";
    stmt.params.push_back(Value::integer(checked_count(options.offset, "offset")));
  }
  return stmt;
}

Statement build_insert(const SchemaRegistry& registry, std::string_view entity_name,
                       const std::map<std::string, Value>& values) {
  const auto& entity = registry.entity(entity_name);
  for (const auto& [name, value] : values) {
    const auto* field = entity.find_field(name);
    if (!field)
      throw Error(Errc::unknown_field, "no field '" + name + "' on entity " + entity.name);
    if (value.is_null()) continue;  // nullability is checked below
    if (value.kind() != field->kind)
      throw Error(Errc::type_mismatch, "field '" + name + "' is " + value_kind_name(field->kind) +
                                           ", value is " + value_kind_name(value.kind()));
  }

  Statement stmt;
  std::string columns;
  std::string placeholders;
  for (const auto& field : entity.fields) {
    auto it = values.find(field.name);
    bool supplied = it != values.end() && !it->second.is_null();
    if (!supplied) {
      if (!field.nullable)
        throw Error(Errc::missing_field, "field '" + field.name + "' is required");
      if (it == values.end()) continue;
    }
    if (!columns.empty()) {
      columns += ", ";
      placeholders += ", ";
    }
    columns += field.name;
    placeholders += '?';
    stmt.params.push_back(it->second);
  }
  stmt.text = "INSERT INTO " + entity.name + " (" + columns + ") VALUES (" + placeholders + ")";
  return stmt;
}

Statement build_update(const SchemaRegistry& registry, std::string_view entity_name,
                       const std::map<std::string, Value>& changes, const FilterExpr& filter) {
  const auto& entity = registry.entity(entity_name);
  if (changes.empty()) throw Error(Errc::empty_changes, "no fields to update");
  const auto& pk = entity.primary_key();
  for (const auto& [name, value] : changes) {
    const auto* field = entity.find_field(name);
    if (!field)
      throw Error(Errc::unknown_field, "no field '" + name + "' on entity " + entity.name);
    if (field->primary_key)
      throw Error(Errc::primary_key_update, "cannot update primary key '" + pk.name + "'");
    if (value.is_null()) {
      if (!field->nullable)
        throw Error(Errc::type_mismatch, "field '" + name + "' is not nullable");
      continue;
    }
    if (value.kind() != field->kind)
      throw Error(Errc::type_mismatch, "field '" + name + "' is " + value_kind_name(field->kind) +
                                           ", value is " + value_kind_name(value.kind()));
  }

  Statement stmt;
  stmt.text = "UPDATE " + entity.name + " SET ";
  bool first = true;
  for (const auto& field : entity.fields) {
    auto it = changes.find(field.name);
    if (it == changes.end()) continue;
    if (!first) stmt.text += ", ";
    first = false;
    stmt.text += field.name;
    stmt.text += " = ?";
    stmt.params.push_back(it->second);
  }
  append_where(entity, filter, stmt.text, stmt.params);
  return stmt;
}

Statement build_delete(const SchemaRegistry& registry, std::string_view entity_name,
                       const FilterExpr& filter) {
  const auto& entity = registry.entity(entity_name);
  Statement stmt;
  stmt.text = "DELETE FROM " + entity.name;
  append_where(entity, filter, stmt.text, stmt.params);
  return stmt;
}

}  // namespace mstore
