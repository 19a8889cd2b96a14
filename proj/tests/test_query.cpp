#include <doctest.h>

#include <functional>

#include "mstore/query.hpp"
#include "support/fixtures.hpp"
#include "support/random_gen.hpp"

using namespace mstore;

namespace {

SchemaRegistry students_only() {
  SchemaRegistry registry;
  registry.register_entity(fixtures::students_entity());
  registry.register_store({"solo", StorePrivacy::private_cloud, StoreKind::embedded, ""});
  return registry;
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::invalid_argument;
}

std::size_t placeholders(const std::string& text) {
  return std::size_t(std::count(text.begin(), text.end(), '?'));
}

}  // namespace

TEST_CASE("select-all emits every declared field in order") {
  auto registry = students_only();
  auto stmt = build_select(registry, "Students");
  CHECK(stmt.text == "SELECT id_student, surname, name, birthday, agv_sorce FROM Students");
  CHECK(stmt.params.empty());
}

TEST_CASE("identity filter emits no WHERE clause") {
  auto registry = students_only();
  QueryOptions options;
  options.filter = filters::always();
  auto stmt = build_select(registry, "Students", options);
  CHECK(stmt.text.find("WHERE") == std::string::npos);
}

TEST_CASE("filter and sort render into WHERE and ORDER BY") {
  auto registry = students_only();
  QueryOptions options;
  options.filter = filters::gt("agv_sorce", Value::floating(4.0));
  options.sorts = {{"surname", SortDirection::asc}};
  auto stmt = build_select(registry, "Students", options);
  CHECK(stmt.text ==
        "SELECT id_student, surname, name, birthday, agv_sorce FROM Students"
        " WHERE agv_sorce > ? ORDER BY surname ASC");
  REQUIRE(stmt.params.size() == 1);
  CHECK(stmt.params[0] == Value::floating(4.0));
}

TEST_CASE("limit and offset flow through parameters") {
  auto registry = students_only();
  QueryOptions options;
  options.limit = 3;
  options.offset = 1;
  auto stmt = build_select(registry, "Students", options);
  CHECK(stmt.text.ends_with(" LIMIT ? OFFSET ?"));
  REQUIRE(stmt.params.size() == 2);
  CHECK(stmt.params[0] == Value::integer(3));
  CHECK(stmt.params[1] == Value::integer(1));

  SUBCASE("offset without limit is permitted") {
    QueryOptions only_offset;
    only_offset.offset = 2;
    auto s = build_select(registry, "Students", only_offset);
    CHECK(s.text.ends_with(" OFFSET ?"));
    CHECK(s.text.find("LIMIT") == std::string::npos);
  }
  SUBCASE("negative limit is rejected") {
    QueryOptions bad;
    bad.limit = -1;
    CHECK(code_of([&] { build_select(registry, "Students", bad); }) == Errc::invalid_argument);
  }
}

TEST_CASE("select on an unknown entity or field fails") {
  auto registry = students_only();
  CHECK(code_of([&] { build_select(registry, "Nobody"); }) == Errc::unknown_entity);
  QueryOptions options;
  options.filter = filters::eq("nickname", Value::text("x"));
  CHECK(code_of([&] { build_select(registry, "Students", options); }) == Errc::unknown_field);
  QueryOptions bad_sort;
  bad_sort.sorts = {{"nickname", SortDirection::asc}};
  CHECK(code_of([&] { build_select(registry, "Students", bad_sort); }) == Errc::unknown_field);
}

TEST_CASE("insert lists supplied fields in declaration order") {
  auto registry = students_only();
  auto record = fixtures::student(1, "Ivanov", "Ivan", "1995-01-01", 4.5);
  auto stmt = build_insert(registry, "Students", record.values);
  CHECK(stmt.text ==
        "INSERT INTO Students (id_student, surname, name, birthday, agv_sorce)"
        " VALUES (?, ?, ?, ?, ?)");
  REQUIRE(stmt.params.size() == 5);
  CHECK(stmt.params[0] == Value::integer(1));
  CHECK(stmt.params[1] == Value::text("Ivanov"));
  CHECK(stmt.params[2] == Value::text("Ivan"));
  CHECK(stmt.params[3] == Value::date("1995-01-01"));
  CHECK(stmt.params[4] == Value::floating(4.5));
}

TEST_CASE("insert validation") {
  auto registry = students_only();
  auto record = fixtures::student(1, "Ivanov", "Ivan", "1995-01-01", 4.5);

  SUBCASE("missing primary key") {
    record.values.erase("id_student");
    CHECK(code_of([&] { build_insert(registry, "Students", record.values); }) ==
          Errc::missing_field);
  }
  SUBCASE("unknown extra field") {
    record.values.emplace("nickname", Value::text("Vanya"));
    CHECK(code_of([&] { build_insert(registry, "Students", record.values); }) ==
          Errc::unknown_field);
  }
  SUBCASE("kind mismatch") {
    record.values["agv_sorce"] = Value::text("high");
    CHECK(code_of([&] { build_insert(registry, "Students", record.values); }) ==
          Errc::type_mismatch);
  }
  SUBCASE("null for a required field") {
    record.values["surname"] = Value::null();
    CHECK(code_of([&] { build_insert(registry, "Students", record.values); }) ==
          Errc::missing_field);
  }
  SUBCASE("nullable field may be omitted") {
    auto registry2 = fixtures::students_groups();
    auto r = fixtures::student(1, "Ivanov", "Ivan", "1995-01-01", 4.5);
    auto stmt = build_insert(registry2, "Students", r.values);  // no group_id
    CHECK(stmt.text.find("group_id") == std::string::npos);
    CHECK(placeholders(stmt.text) == stmt.params.size());
  }
}

TEST_CASE("update renders SET in declaration order and keeps params aligned") {
  auto registry = students_only();
  std::map<std::string, Value> changes = {{"agv_sorce", Value::floating(5.0)}};
  auto stmt = build_update(registry, "Students", changes,
                           filters::eq("id_student", Value::integer(1)));
  CHECK(stmt.text == "UPDATE Students SET agv_sorce = ? WHERE id_student = ?");
  REQUIRE(stmt.params.size() == 2);
  CHECK(stmt.params[0] == Value::floating(5.0));
  CHECK(stmt.params[1] == Value::integer(1));

  SUBCASE("multiple fields follow declaration order regardless of map order") {
    std::map<std::string, Value> both = {{"surname", Value::text("Petrov")},
                                         {"agv_sorce", Value::floating(3.0)}};
    auto s = build_update(registry, "Students", both, filters::always());
    CHECK(s.text == "UPDATE Students SET surname = ?, agv_sorce = ?");
    CHECK(s.params[0] == Value::text("Petrov"));
  }
  SUBCASE("empty changes") {
    CHECK(code_of([&] { build_update(registry, "Students", {}, filters::always()); }) ==
          Errc::empty_changes);
  }
  SUBCASE("primary key update") {
    std::map<std::string, Value> bad = {{"id_student", Value::integer(9)}};
    CHECK(code_of([&] { build_update(registry, "Students", bad, filters::always()); }) ==
          Errc::primary_key_update);
  }
  SUBCASE("unknown field") {
    std::map<std::string, Value> bad = {{"nickname", Value::text("x")}};
    CHECK(code_of([&] { build_update(registry, "Students", bad, filters::always()); }) ==
          Errc::unknown_field);
  }
}

TEST_CASE("delete renders WHERE only for a real filter") {
  auto registry = students_only();
  auto with_filter = build_delete(registry, "Students", filters::eq("id_student", Value::integer(1)));
  CHECK(with_filter.text == "DELETE FROM Students WHERE id_student = ?");
  REQUIRE(with_filter.params.size() == 1);
  CHECK(with_filter.params[0] == Value::integer(1));

  auto delete_all = build_delete(registry, "Students", filters::always());
  CHECK(delete_all.text == "DELETE FROM Students");
  CHECK(delete_all.params.empty());

  QueryOptions unused;
  CHECK(code_of([&] {
          build_delete(registry, "Students", filters::eq("nickname", Value::text("x")));
        }) == Errc::unknown_field);
}

TEST_CASE("render_filter parenthesizes composites") {
  auto entity = fixtures::students_entity();

  SUBCASE("conjunction") {
    auto f = filters::all_of({filters::eq("surname", Value::text("Ivanov")),
                              filters::gt("agv_sorce", Value::floating(4.0))});
    auto rendered = render_filter(entity, f);
    REQUIRE(rendered.clause.has_value());
    CHECK(*rendered.clause == "(surname = ? AND agv_sorce > ?)");
    REQUIRE(rendered.params.size() == 2);
    CHECK(rendered.params[0] == Value::text("Ivanov"));
    CHECK(rendered.params[1] == Value::floating(4.0));
  }
  SUBCASE("negated identity materializes as 1=1") {
    auto rendered = render_filter(entity, filters::negate(filters::always()));
    REQUIRE(rendered.clause.has_value());
    CHECK(*rendered.clause == "(NOT (1=1))");
    CHECK(rendered.params.empty());
  }
  SUBCASE("top-level identity renders as no clause") {
    auto rendered = render_filter(entity, filters::always());
    CHECK(!rendered.clause.has_value());
    CHECK(rendered.params.empty());
  }
  SUBCASE("empty conjunction and disjunction") {
    CHECK(*render_filter(entity, filters::all_of({})).clause == "(1=1)");
    CHECK(*render_filter(entity, filters::any_of({})).clause == "(1=0)");
  }
  SUBCASE("null comparisons become IS NULL") {
    auto rendered = render_filter(entity, filters::eq("birthday", Value::null()));
    CHECK(*rendered.clause == "birthday IS NULL");
    CHECK(rendered.params.empty());
    auto not_null = render_filter(entity, filters::neq("birthday", Value::null()));
    CHECK(*not_null.clause == "birthday IS NOT NULL");
  }
  SUBCASE("ordering against null is a type error") {
    CHECK(code_of([&] { render_filter(entity, filters::lt("agv_sorce", Value::null())); }) ==
          Errc::type_mismatch);
  }
  SUBCASE("LIKE demands text on both sides") {
    CHECK(code_of([&] { render_filter(entity, filters::like("id_student", "1%")); }) ==
          Errc::type_mismatch);
    auto ok = render_filter(entity, filters::like("surname", "Iva%"));
    CHECK(*ok.clause == "surname LIKE ?");
  }
  SUBCASE("nested composite") {
    auto f = filters::any_of(
        {filters::negate(filters::eq("name", Value::text("Ivan"))),
         filters::all_of({filters::ge("agv_sorce", Value::floating(3.0)),
                          filters::neq("surname", Value::text("Petrov"))})});
    auto rendered = render_filter(entity, f);
    CHECK(*rendered.clause == "((NOT name = ?) OR (agv_sorce >= ? AND surname <> ?))");
    CHECK(rendered.params.size() == 3);
  }
}

TEST_CASE("placeholder count always equals param count") {
  gen::Rng rng(20240811);
  auto registry = students_only();
  const auto& entity = registry.entity("Students");
  for (int i = 0; i < 300; ++i) {
    auto options = gen::random_options(rng, entity);
    auto stmt = build_select(registry, "Students", options);
    CHECK(placeholders(stmt.text) == stmt.params.size());
  }
}

TEST_CASE("generation is a pure function") {
  gen::Rng rng(7);
  auto registry = students_only();
  const auto& entity = registry.entity("Students");
  for (int i = 0; i < 50; ++i) {
    auto options = gen::random_options(rng, entity);
    auto a = build_select(registry, "Students", options);
    auto b = build_select(registry, "Students", options);
    CHECK(a.text == b.text);
    CHECK(a.params == b.params);
  }
}
