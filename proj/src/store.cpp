#include "mstore/store.hpp"

#include <algorithm>
#include <chrono>

namespace mstore {

bool like_match(std::string_view pattern, std::string_view text) {
  // classic two-pointer matcher with backtracking on the last '%'
  std::size_t p = 0, t = 0;
  std::size_t star = std::string_view::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '_' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '%') {
      star = p++;
      mark = t;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '%') ++p;
  return p == pattern.size();
}

namespace {

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::malformed_statement, why);
}

enum class Tok {
  ident, number, qmark, comma, lparen, rparen, star,
  eq, neq, lt, le, gt, ge, end
};

struct Token {
  Tok kind = Tok::end;
  std::string text;  // ident spelling or digits
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_head = [](char c) { return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto ident_tail = [&](char c) { return ident_head(c) || (c >= '0' && c <= '9'); };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if (ident_head(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_tail(text[j])) ++j;
      out.push_back({Tok::ident, std::string(text.substr(i, j - i))});
      i = j;
      continue;
    }
    if (c >= '0' && c <= '9') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      out.push_back({Tok::number, std::string(text.substr(i, j - i))});
      i = j;
      continue;
    }
    switch (c) {
      case '?': out.push_back({Tok::qmark, "?"}); ++i; break;
      case ',': out.push_back({Tok::comma, ","}); ++i; break;
      case '(': out.push_back({Tok::lparen, "("}); ++i; break;
      case ')': out.push_back({Tok::rparen, ")"}); ++i; break;
      case '*': out.push_back({Tok::star, "*"}); ++i; break;
      case '=': out.push_back({Tok::eq, "="}); ++i; break;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::neq, "<>"});
          i += 2;
        } else if (i + 1 < text.size() && text[i + 1] == '=') {
          out.push_back({Tok::le, "<="});
          i += 2;
        } else {
          out.push_back({Tok::lt, "<"});
          ++i;
        }
        break;
      case '>':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          out.push_back({Tok::ge, ">="});
          i += 2;
        } else {
          out.push_back({Tok::gt, ">"});
          ++i;
        }
        break;
      default:
        malformed(std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Tok::end, ""});
  return out;
}

// Filter AST with parameters already bound.
struct Cond {
  enum class Kind { always_true, always_false, cmp, is_null, is_not_null, conjunction, disjunction, negation };
  Kind kind = Cond::Kind::always_true;
  std::size_t field = 0;
  CompareOp op = CompareOp::eq;
  Value literal;
  std::vector<Cond> children;
};

struct OrderKey {
  std::size_t field = 0;
  bool ascending = true;
};

struct ParsedStatement {
  enum class Kind { select, insert, update, del } kind = Kind::select;
  const EntityDescriptor* entity = nullptr;
  // select
  std::vector<std::size_t> columns;
  std::vector<OrderKey> order;
  std::optional<std::int64_t> limit;
  std::optional<std::int64_t> offset;
  // insert / update: (field index, value) in statement order
  std::vector<std::pair<std::size_t, Value>> assignments;
  // where
  std::optional<Cond> where;
};

class Parser {
 public:
  Parser(const SchemaRegistry& registry, std::vector<Token> tokens, const std::vector<Value>& params)
      : registry_(registry), tokens_(std::move(tokens)), params_(params) {}

  ParsedStatement parse() {
    ParsedStatement stmt;
    std::string head = expect_ident();
    if (head == "SELECT") {
      parse_select(stmt);
    } else if (head == "INSERT") {
      parse_insert(stmt);
    } else if (head == "UPDATE") {
      parse_update(stmt);
    } else if (head == "DELETE") {
      parse_delete(stmt);
    } else {
      malformed("expected SELECT, INSERT, UPDATE or DELETE");
    }
    if (peek().kind != Tok::end) malformed("trailing tokens after statement");
    if (param_pos_ != params_.size()) malformed("statement needs " + std::to_string(param_pos_) +
                                                " parameters, got " + std::to_string(params_.size()));
    return stmt;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }

  void expect(Tok kind, const char* what) {
    if (!accept(kind)) malformed(std::string("expected ") + what);
  }

  std::string expect_ident() {
    if (peek().kind != Tok::ident) malformed("expected identifier");
    return take().text;
  }

  bool accept_keyword(std::string_view kw) {
    if (peek().kind == Tok::ident && peek().text == kw) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw)) malformed("expected " + std::string(kw));
  }

  Value next_param() {
    if (param_pos_ >= params_.size()) malformed("more placeholders than parameters");
    return params_[param_pos_++];
  }

  const EntityDescriptor& resolve_entity(const std::string& name) {
    const auto* e = registry_.find_entity(name);
    if (!e) throw Error(Errc::unknown_table_or_field, "no table '" + name + "'");
    return *e;
  }

  std::size_t resolve_field(const std::string& name) {
    const auto* f = entity_->find_field(name);
    if (!f) throw Error(Errc::unknown_table_or_field,
                        "no field '" + name + "' on table " + entity_->name);
    return entity_->field_index(name);
  }

  std::int64_t count_param(const char* what) {
    Value v = next_param();
    if (v.kind() != ValueKind::integer || v.as_integer() < 0)
      malformed(std::string(what) + " must be a non-negative integer parameter");
    return v.as_integer();
  }

  void parse_select(ParsedStatement& stmt) {
    stmt.kind = ParsedStatement::Kind::select;
    std::vector<std::string> names;
    bool all = accept(Tok::star);
    if (!all) {
      names.push_back(expect_ident());
      while (accept(Tok::comma)) names.push_back(expect_ident());
    }
    expect_keyword("FROM");
    entity_ = &resolve_entity(expect_ident());
    stmt.entity = entity_;
    if (all) {
      for (std::size_t i = 0; i < entity_->fields.size(); ++i) stmt.columns.push_back(i);
    } else {
      for (const auto& n : names) stmt.columns.push_back(resolve_field(n));
    }
    if (accept_keyword("WHERE")) stmt.where = parse_or();
    if (accept_keyword("ORDER")) {
      expect_keyword("BY");
      do {
        OrderKey key;
        key.field = resolve_field(expect_ident());
        if (accept_keyword("DESC")) {
          key.ascending = false;
        } else {
          accept_keyword("ASC");
        }
        stmt.order.push_back(key);
      } while (accept(Tok::comma));
    }
    if (accept_keyword("LIMIT")) {
      expect(Tok::qmark, "? after LIMIT");
      stmt.limit = count_param("LIMIT");
    }
    if (accept_keyword("OFFSET")) {
      expect(Tok::qmark, "? after OFFSET");
      stmt.offset = count_param("OFFSET");
    }
  }

  void parse_insert(ParsedStatement& stmt) {
    stmt.kind = ParsedStatement::Kind::insert;
    expect_keyword("INTO");
    entity_ = &resolve_entity(expect_ident());
    stmt.entity = entity_;
    expect(Tok::lparen, "(");
    std::vector<std::size_t> cols;
    cols.push_back(resolve_field(expect_ident()));
    while (accept(Tok::comma)) cols.push_back(resolve_field(expect_ident()));
    expect(Tok::rparen, ")");
    expect_keyword("VALUES");
    expect(Tok::lparen, "(");
    std::size_t n = 0;
    expect(Tok::qmark, "?");
    stmt.assignments.emplace_back(cols[n++], next_param());
    while (accept(Tok::comma)) {
      if (n >= cols.size()) malformed("more values than columns");
      expect(Tok::qmark, "?");
      stmt.assignments.emplace_back(cols[n++], next_param());
    }
    expect(Tok::rparen, ")");
    if (n != cols.size()) malformed("fewer values than columns");
  }

  void parse_update(ParsedStatement& stmt) {
    stmt.kind = ParsedStatement::Kind::update;
    entity_ = &resolve_entity(expect_ident());
    stmt.entity = entity_;
    expect_keyword("SET");
    do {
      std::size_t field = resolve_field(expect_ident());
      expect(Tok::eq, "=");
      expect(Tok::qmark, "?");
      stmt.assignments.emplace_back(field, next_param());
    } while (accept(Tok::comma));
    if (accept_keyword("WHERE")) stmt.where = parse_or();
  }

  void parse_delete(ParsedStatement& stmt) {
    stmt.kind = ParsedStatement::Kind::del;
    expect_keyword("FROM");
    entity_ = &resolve_entity(expect_ident());
    stmt.entity = entity_;
    if (accept_keyword("WHERE")) stmt.where = parse_or();
  }

  // precedence: OR < AND < NOT < primary
  Cond parse_or() {
    Cond lhs = parse_and();
    if (peek().kind == Tok::ident && peek().text == "OR") {
      Cond node;
      node.kind = Cond::Kind::disjunction;
      node.children.push_back(std::move(lhs));
      while (accept_keyword("OR")) node.children.push_back(parse_and());
      return node;
    }
    return lhs;
  }

  Cond parse_and() {
    Cond lhs = parse_unary();
    if (peek().kind == Tok::ident && peek().text == "AND") {
      Cond node;
      node.kind = Cond::Kind::conjunction;
      node.children.push_back(std::move(lhs));
      while (accept_keyword("AND")) node.children.push_back(parse_unary());
      return node;
    }
    return lhs;
  }

  Cond parse_unary() {
    if (accept_keyword("NOT")) {
      Cond node;
      node.kind = Cond::Kind::negation;
      node.children.push_back(parse_unary());
      return node;
    }
    return parse_primary();
  }

  Cond parse_primary() {
    if (accept(Tok::lparen)) {
      Cond inner = parse_or();
      expect(Tok::rparen, ")");
      return inner;
    }
    if (peek().kind == Tok::number) {
      // the identity/absurd literals 1=1 and 1=0
      std::string a = take().text;
      expect(Tok::eq, "=");
      if (peek().kind != Tok::number) malformed("expected 1=1 or 1=0");
      std::string b = take().text;
      Cond node;
      if (a == "1" && b == "1") {
        node.kind = Cond::Kind::always_true;
      } else if (a == "1" && b == "0") {
        node.kind = Cond::Kind::always_false;
      } else {
        malformed("expected 1=1 or 1=0");
      }
      return node;
    }
    std::string field_name = expect_ident();
    std::size_t field = resolve_field(field_name);
    const auto& descriptor = entity_->fields[field];
    Cond node;
    node.field = field;
    if (accept_keyword("IS")) {
      bool negated = accept_keyword("NOT");
      expect_keyword("NULL");
      node.kind = negated ? Cond::Kind::is_not_null : Cond::Kind::is_null;
      return node;
    }
    node.kind = Cond::Kind::cmp;
    if (accept_keyword("LIKE")) {
      node.op = CompareOp::like;
    } else {
      switch (take().kind) {
        case Tok::eq: node.op = CompareOp::eq; break;
        case Tok::neq: node.op = CompareOp::neq; break;
        case Tok::lt: node.op = CompareOp::lt; break;
        case Tok::le: node.op = CompareOp::le; break;
        case Tok::gt: node.op = CompareOp::gt; break;
        case Tok::ge: node.op = CompareOp::ge; break;
        default: malformed("expected a comparison operator");
      }
    }
    expect(Tok::qmark, "?");
    node.literal = next_param();
    if (node.op == CompareOp::like) {
      if (descriptor.kind != ValueKind::text || node.literal.kind() != ValueKind::text)
        throw Error(Errc::type_mismatch, "LIKE applies to text fields only");
    } else {
      if (node.literal.is_null())
        throw Error(Errc::type_mismatch,
                    "NULL parameter in comparison; use IS NULL / IS NOT NULL");
      if (!comparable_kinds(descriptor.kind, node.literal.kind()))
        throw Error(Errc::type_mismatch, "field '" + descriptor.name + "' is " +
                                             value_kind_name(descriptor.kind) + ", parameter is " +
                                             value_kind_name(node.literal.kind()));
    }
    return node;
  }

  const SchemaRegistry& registry_;
  std::vector<Token> tokens_;
  const std::vector<Value>& params_;
  std::size_t pos_ = 0;
  std::size_t param_pos_ = 0;
  const EntityDescriptor* entity_ = nullptr;
};

bool eval_cond(const Cond& cond, const Row& row) {
  switch (cond.kind) {
    case Cond::Kind::always_true: return true;
    case Cond::Kind::always_false: return false;
    case Cond::Kind::is_null: return row[cond.field].is_null();
    case Cond::Kind::is_not_null: return !row[cond.field].is_null();
    case Cond::Kind::cmp: {
      const Value& v = row[cond.field];
      if (v.is_null()) return false;  // comparisons never match NULL cells
      if (cond.op == CompareOp::like) return like_match(cond.literal.as_text(), v.as_text());
      int c = compare_values(v, cond.literal);
      switch (cond.op) {
        case CompareOp::eq: return c == 0;
        case CompareOp::neq: return c != 0;
        case CompareOp::lt: return c < 0;
        case CompareOp::le: return c <= 0;
        case CompareOp::gt: return c > 0;
        case CompareOp::ge: return c >= 0;
        default: return false;
      }
    }
    case Cond::Kind::conjunction:
      return std::all_of(cond.children.begin(), cond.children.end(),
                         [&](const Cond& c) { return eval_cond(c, row); });
    case Cond::Kind::disjunction:
      return std::any_of(cond.children.begin(), cond.children.end(),
                         [&](const Cond& c) { return eval_cond(c, row); });
    case Cond::Kind::negation: return !eval_cond(cond.children.front(), row);
  }
  return false;
}

void sort_rows(std::vector<Row>& rows, const std::vector<OrderKey>& order) {
  if (order.empty()) return;
  std::stable_sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    for (const auto& key : order) {
      int c = compare_values(a[key.field], b[key.field]);
      if (c != 0) return key.ascending ? c < 0 : c > 0;
    }
    return false;
  });
}

void paginate(std::vector<Row>& rows, std::optional<std::int64_t> offset,
              std::optional<std::int64_t> limit) {
  if (offset) {
    auto skip = std::min<std::size_t>(rows.size(), static_cast<std::size_t>(*offset));
    rows.erase(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(skip));
  }
  if (limit && rows.size() > static_cast<std::size_t>(*limit))
    rows.resize(static_cast<std::size_t>(*limit));
}

}  // namespace

StoreHandle::StoreHandle(const SchemaRegistry& registry, LocationId location)
    : registry_(&registry), location_(std::move(location)) {
  for (const auto& e : registry.entities()) tables_.emplace_back(e.name, std::vector<Row>{});
}

bool StoreHandle::is_open() const {
  std::lock_guard lock(mu_);
  return open_;
}

void StoreHandle::close() {
  std::lock_guard lock(mu_);
  open_ = false;
}

std::vector<Row>& StoreHandle::table(std::string_view entity) {
  for (auto& [name, rows] : tables_)
    if (name == entity) return rows;
  throw Error(Errc::unknown_table_or_field, "no table '" + std::string(entity) + "'");
}

ExecResult StoreHandle::execute(const Statement& statement) {
  return execute_raw(statement.text, statement.params);
}

ExecResult StoreHandle::execute_raw(const std::string& text, const std::vector<Value>& params) {
  std::lock_guard lock(mu_);
  if (!open_) throw Error(Errc::closed_store, "store '" + location_ + "' is closed");
  return run(text, params);
}

ExecResult StoreHandle::run(const std::string& text, const std::vector<Value>& params) {
  Parser parser(*registry_, tokenize(text), params);
  ParsedStatement stmt = parser.parse();
  const auto& entity = *stmt.entity;
  auto& rows = table(entity.name);
  std::size_t pk = entity.primary_key_index();

  auto matches = [&](const Row& row) { return !stmt.where || eval_cond(*stmt.where, row); };

  auto check_cell = [&](std::size_t field, const Value& v) {
    const auto& descriptor = entity.fields[field];
    if (v.is_null()) {
      if (!descriptor.nullable)
        throw Error(Errc::constraint_violation,
                    "field '" + descriptor.name + "' of " + entity.name + " is not nullable");
      return;
    }
    if (v.kind() != descriptor.kind)
      throw Error(Errc::type_mismatch, "field '" + descriptor.name + "' is " +
                                           value_kind_name(descriptor.kind) + ", value is " +
                                           value_kind_name(v.kind()));
  };

  switch (stmt.kind) {
    case ParsedStatement::Kind::select: {
      std::vector<Row> selected;
      for (const auto& row : rows)
        if (matches(row)) selected.push_back(row);
      sort_rows(selected, stmt.order);
      paginate(selected, stmt.offset, stmt.limit);
      ResultSet set;
      for (auto c : stmt.columns) set.columns.push_back(entity.fields[c].name);
      for (auto& row : selected) {
        Row projected;
        projected.reserve(stmt.columns.size());
        for (auto c : stmt.columns) projected.push_back(row[c]);
        set.rows.push_back(std::move(projected));
      }
      ExecResult result;
      result.rows = std::move(set);
      result.affected = 0;
      return result;
    }
    case ParsedStatement::Kind::insert: {
      Row row(entity.fields.size(), Value::null());
      for (const auto& [field, value] : stmt.assignments) {
        check_cell(field, value);
        row[field] = value;
      }
      for (std::size_t i = 0; i < entity.fields.size(); ++i)
        if (row[i].is_null() && !entity.fields[i].nullable)
          throw Error(Errc::constraint_violation,
                      "field '" + entity.fields[i].name + "' of " + entity.name + " is not nullable");
      for (const auto& existing : rows)
        if (compare_values(existing[pk], row[pk]) == 0)
          throw Error(Errc::constraint_violation, "duplicate primary key " + row[pk].to_string() +
                                                      " in " + entity.name + "@" + location_);
      rows.push_back(std::move(row));
      ExecResult result;
      result.affected = 1;
      return result;
    }
    case ParsedStatement::Kind::update: {
      for (const auto& [field, value] : stmt.assignments) check_cell(field, value);
      // stage the full table so a constraint failure leaves it untouched
      std::vector<Row> staged = rows;
      std::int64_t affected = 0;
      for (auto& row : staged) {
        if (!matches(row)) continue;
        for (const auto& [field, value] : stmt.assignments) row[field] = value;
        ++affected;
      }
      for (std::size_t i = 0; i < staged.size(); ++i)
        for (std::size_t j = i + 1; j < staged.size(); ++j)
          if (compare_values(staged[i][pk], staged[j][pk]) == 0)
            throw Error(Errc::constraint_violation,
                        "duplicate primary key " + staged[i][pk].to_string() + " in " + entity.name);
      rows = std::move(staged);
      ExecResult result;
      result.affected = affected;
      return result;
    }
    case ParsedStatement::Kind::del: {
      std::vector<Row> kept;
      std::int64_t affected = 0;
      for (auto& row : rows) {
        if (matches(row)) {
          ++affected;
        } else {
          kept.push_back(std::move(row));
        }
      }
      rows = std::move(kept);
      ExecResult result;
      result.affected = affected;
      return result;
    }
  }
  malformed("unreachable");
}

Measurement StoreHandle::measure(const Statement& statement) {
  Measurement m;
  auto start = std::chrono::steady_clock::now();
  m.result = execute(statement);
  auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  {
    std::lock_guard lock(mu_);
    m.latency_seconds = injected_delay_.value_or(elapsed);
  }
  m.payload_bytes = serialized_size(statement.params);
  if (m.result.is_select()) {
    for (const auto& row : m.result.rows->rows) m.payload_bytes += serialized_size(row);
  } else {
    m.payload_bytes += 8;  // the affected count is returned as one integer
  }
  return m;
}

void StoreHandle::set_injected_delay(std::optional<double> seconds) {
  std::lock_guard lock(mu_);
  injected_delay_ = seconds;
}

std::optional<double> StoreHandle::injected_delay() const {
  std::lock_guard lock(mu_);
  return injected_delay_;
}

std::size_t StoreHandle::row_count(std::string_view entity) const {
  std::lock_guard lock(mu_);
  for (const auto& [name, rows] : tables_)
    if (name == entity) return rows.size();
  throw Error(Errc::unknown_table_or_field, "no table '" + std::string(entity) + "'");
}

std::vector<Row> StoreHandle::table_rows(std::string_view entity) const {
  std::lock_guard lock(mu_);
  for (const auto& [name, rows] : tables_)
    if (name == entity) return rows;
  throw Error(Errc::unknown_table_or_field, "no table '" + std::string(entity) + "'");
}

std::string StoreHandle::snapshot() const {
  std::lock_guard lock(mu_);
  std::string out = "store " + location_ + "\n";
  for (const auto& [name, rows] : tables_) {
    out += "table " + name + "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) out += '|';
        out += row[i].to_string();
      }
      out += '\n';
    }
  }
  return out;
}

std::unique_ptr<StoreHandle> open_store(const SchemaRegistry& registry, const LocationId& location) {
  const auto& descriptor = registry.store(location);
  if (descriptor.kind != StoreKind::embedded)
    throw Error(Errc::unsupported_store_kind,
                "store '" + location + "' is external; only embedded stores can be opened");
  return std::unique_ptr<StoreHandle>(new StoreHandle(registry, location));
}

}  // namespace mstore
