#pragma once

#include "mstore/runtime.hpp"

namespace fixtures {

using namespace mstore;

inline EntityDescriptor students_entity() {
  EntityDescriptor e;
  e.name = "Students";
  e.fields = {
      {"id_student", ValueKind::integer, false, true},
      {"surname", ValueKind::text, false, false},
      {"name", ValueKind::text, false, false},
      {"birthday", ValueKind::date, false, false},
      {"agv_sorce", ValueKind::floating, false, false},
  };
  return e;
}

// Students plus a nullable group FK and the Groups parent with a one_to_many.
inline SchemaRegistry students_groups(OnDelete on_delete = OnDelete::restrict) {
  SchemaRegistry registry;
  EntityDescriptor students = students_entity();
  students.fields.push_back({"group_id", ValueKind::integer, true, false});
  registry.register_entity(students);

  EntityDescriptor groups;
  groups.name = "Groups";
  groups.fields = {
      {"id_group", ValueKind::integer, false, true},
      {"title", ValueKind::text, false, false},
  };
  RelationDescriptor rel;
  rel.name = "group_students";
  rel.kind = RelationKind::one_to_many;
  rel.target_entity = "Students";
  rel.foreign_key_field = "group_id";
  rel.on_delete = on_delete;
  groups.relations.push_back(rel);
  registry.register_entity(groups);

  registry.register_store({"private1", StorePrivacy::private_cloud, StoreKind::embedded, ""});
  registry.register_store({"public1", StorePrivacy::public_cloud, StoreKind::embedded, ""});
  return registry;
}

// Students <-> Courses through the Enrollment link entity.
inline SchemaRegistry students_courses(OnDelete on_delete = OnDelete::restrict) {
  SchemaRegistry registry;
  EntityDescriptor students = students_entity();
  RelationDescriptor rel;
  rel.name = "student_courses";
  rel.kind = RelationKind::many_to_many;
  rel.target_entity = "Courses";
  rel.link_entity = "Enrollment";
  rel.on_delete = on_delete;
  students.relations.push_back(rel);
  registry.register_entity(students);

  EntityDescriptor courses;
  courses.name = "Courses";
  courses.fields = {
      {"id_course", ValueKind::integer, false, true},
      {"title", ValueKind::text, false, false},
  };
  registry.register_entity(courses);

  EntityDescriptor enrollment;
  enrollment.name = "Enrollment";
  enrollment.fields = {
      {"id_enrollment", ValueKind::integer, false, true},
      {"student_id", ValueKind::integer, false, false},
      {"course_id", ValueKind::integer, false, false},
  };
  registry.register_entity(enrollment);

  registry.register_store({"private1", StorePrivacy::private_cloud, StoreKind::embedded, ""});
  registry.register_store({"public1", StorePrivacy::public_cloud, StoreKind::embedded, ""});
  return registry;
}

// Authors -(one_to_many)-> Books -(many_to_many)-> Tags via BookTags.
inline SchemaRegistry library(OnDelete author_books, OnDelete book_tags, int num_stores = 2) {
  SchemaRegistry registry;

  EntityDescriptor authors;
  authors.name = "Authors";
  authors.fields = {
      {"id_author", ValueKind::integer, false, true},
      {"name", ValueKind::text, false, false},
  };
  RelationDescriptor a_b;
  a_b.name = "author_books";
  a_b.kind = RelationKind::one_to_many;
  a_b.target_entity = "Books";
  a_b.foreign_key_field = "author_id";
  a_b.on_delete = author_books;
  authors.relations.push_back(a_b);
  registry.register_entity(authors);

  EntityDescriptor books;
  books.name = "Books";
  books.fields = {
      {"id_book", ValueKind::integer, false, true},
      {"author_id", ValueKind::integer, true, false},
      {"title", ValueKind::text, false, false},
  };
  RelationDescriptor b_t;
  b_t.name = "book_tags";
  b_t.kind = RelationKind::many_to_many;
  b_t.target_entity = "Tags";
  b_t.link_entity = "BookTags";
  b_t.on_delete = book_tags;
  books.relations.push_back(b_t);
  registry.register_entity(books);

  EntityDescriptor tags;
  tags.name = "Tags";
  tags.fields = {
      {"id_tag", ValueKind::integer, false, true},
      {"label", ValueKind::text, false, false},
  };
  registry.register_entity(tags);

  EntityDescriptor book_tags_link;
  book_tags_link.name = "BookTags";
  book_tags_link.fields = {
      {"id_bt", ValueKind::integer, false, true},
      {"book_id", ValueKind::integer, false, false},
      {"tag_id", ValueKind::integer, false, false},
  };
  registry.register_entity(book_tags_link);

  for (int s = 0; s < num_stores; ++s) {
    StoreDescriptor store;
    store.location = "s" + std::to_string(s);
    store.privacy = s == 0 ? StorePrivacy::private_cloud : StorePrivacy::public_cloud;
    registry.register_store(store);
  }
  return registry;
}

inline Record author(std::int64_t id, std::string name) {
  Record r;
  r.entity = "Authors";
  r.values = {{"id_author", Value::integer(id)}, {"name", Value::text(std::move(name))}};
  return r;
}

inline Record book(std::int64_t id, std::optional<std::int64_t> author_id, std::string title) {
  Record r;
  r.entity = "Books";
  r.values = {{"id_book", Value::integer(id)},
              {"author_id", author_id ? Value::integer(*author_id) : Value::null()},
              {"title", Value::text(std::move(title))}};
  return r;
}

inline Record tag(std::int64_t id, std::string label) {
  Record r;
  r.entity = "Tags";
  r.values = {{"id_tag", Value::integer(id)}, {"label", Value::text(std::move(label))}};
  return r;
}

inline Record student(std::int64_t id, std::string surname, std::string name, std::string birthday,
                      double gpa) {
  Record r;
  r.entity = "Students";
  r.values = {
      {"id_student", Value::integer(id)},
      {"surname", Value::text(std::move(surname))},
      {"name", Value::text(std::move(name))},
      {"birthday", Value::date(birthday)},
      {"agv_sorce", Value::floating(gpa)},
  };
  return r;
}

}  // namespace fixtures
