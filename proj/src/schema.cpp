#include "mstore/schema.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace mstore {

namespace {

// Uppercase dialect keywords cannot be used as identifiers; generated
// statements emit identifiers bare.
const std::unordered_set<std::string_view> kReservedWords = {
    "SELECT", "FROM", "WHERE", "AND", "OR", "NOT", "LIKE", "IS", "NULL",
    "ORDER", "BY", "ASC", "DESC", "LIMIT", "OFFSET", "INSERT", "INTO",
    "VALUES", "UPDATE", "SET", "DELETE",
};

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) { return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), tail);
}

void check_identifier(std::string_view s, const char* what) {
  if (!is_identifier(s))
    throw Error(Errc::invalid_descriptor, std::string(what) + " '" + std::string(s) +
                                              "' is not a valid identifier");
  if (kReservedWords.count(s))
    throw Error(Errc::invalid_descriptor,
                std::string(what) + " '" + std::string(s) + "' is a reserved word");
}

}  // namespace

const FieldDescriptor* EntityDescriptor::find_field(std::string_view field) const {
  for (const auto& f : fields)
    if (f.name == field) return &f;
  return nullptr;
}

const FieldDescriptor& EntityDescriptor::field(std::string_view field) const {
  if (const auto* f = find_field(field)) return *f;
  throw Error(Errc::unknown_field, "no field '" + std::string(field) + "' on entity " + name);
}

std::size_t EntityDescriptor::field_index(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == field) return i;
  throw Error(Errc::unknown_field, "no field '" + std::string(field) + "' on entity " + name);
}

const FieldDescriptor& EntityDescriptor::primary_key() const {
  return fields[primary_key_index()];
}

std::size_t EntityDescriptor::primary_key_index() const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].primary_key) return i;
  throw Error(Errc::invalid_descriptor, "entity " + name + " has no primary key");
}

void SchemaRegistry::register_entity(EntityDescriptor descriptor) {
  if (frozen_) throw Error(Errc::invalid_argument, "registry is frozen");
  check_identifier(descriptor.name, "entity name");
  if (find_entity(descriptor.name))
    throw Error(Errc::duplicate_entity, "entity '" + descriptor.name + "' already registered");
  if (descriptor.fields.empty())
    throw Error(Errc::invalid_descriptor, "entity '" + descriptor.name + "' has no fields");

  std::size_t pk_count = 0;
  std::set<std::string_view> seen;
  for (const auto& f : descriptor.fields) {
    check_identifier(f.name, "field name");
    if (f.name == kLocationAttribute)
      throw Error(Errc::invalid_descriptor,
                  "'" + std::string(kLocationAttribute) + "' is reserved for the location attribute");
    if (!seen.insert(f.name).second)
      throw Error(Errc::invalid_descriptor,
                  "duplicate field '" + f.name + "' on entity " + descriptor.name);
    if (f.primary_key) {
      ++pk_count;
      if (f.nullable)
        throw Error(Errc::invalid_descriptor,
                    "primary key '" + f.name + "' must not be nullable");
    }
  }
  if (pk_count != 1)
    throw Error(Errc::invalid_descriptor, "entity '" + descriptor.name + "' needs exactly one primary key, has " +
                                              std::to_string(pk_count));

  std::set<std::string_view> relation_names;
  for (const auto& r : descriptor.relations) {
    check_identifier(r.name, "relation name");
    check_identifier(r.target_entity, "relation target");
    if (!relation_names.insert(r.name).second)
      throw Error(Errc::invalid_descriptor,
                  "duplicate relation '" + r.name + "' on entity " + descriptor.name);
    if (r.kind == RelationKind::one_to_many) {
      if (r.foreign_key_field.empty() || !r.link_entity.empty())
        throw Error(Errc::invalid_descriptor,
                    "one_to_many relation '" + r.name + "' takes a foreign key field and no link entity");
      check_identifier(r.foreign_key_field, "foreign key field");
    } else {
      if (r.link_entity.empty() || !r.foreign_key_field.empty())
        throw Error(Errc::invalid_descriptor,
                    "many_to_many relation '" + r.name + "' takes a link entity and no foreign key field");
      check_identifier(r.link_entity, "link entity");
    }
  }

  entities_.push_back(std::move(descriptor));
}

void SchemaRegistry::register_store(StoreDescriptor store) {
  if (frozen_) throw Error(Errc::invalid_argument, "registry is frozen");
  check_identifier(store.location, "store location");
  if (find_store(store.location))
    throw Error(Errc::duplicate_location, "store '" + store.location + "' already registered");
  stores_.push_back(std::move(store));
}

void SchemaRegistry::freeze() {
  if (frozen_) return;
  auto diagnostics = validate_schema(*this);
  if (!diagnostics.empty())
    throw Error(Errc::invalid_descriptor,
                "cannot freeze: " + diagnostics.front().code + " " + diagnostics.front().message);
  frozen_ = true;
}

const EntityDescriptor* SchemaRegistry::find_entity(std::string_view name) const {
  for (const auto& e : entities_)
    if (e.name == name) return &e;
  return nullptr;
}

const EntityDescriptor& SchemaRegistry::entity(std::string_view name) const {
  if (const auto* e = find_entity(name)) return *e;
  throw Error(Errc::unknown_entity, "no entity '" + std::string(name) + "'");
}

const StoreDescriptor* SchemaRegistry::find_store(const LocationId& location) const {
  for (const auto& s : stores_)
    if (s.location == location) return &s;
  return nullptr;
}

const StoreDescriptor& SchemaRegistry::store(const LocationId& location) const {
  if (const auto* s = find_store(location)) return *s;
  throw Error(Errc::unknown_location, "no store '" + location + "'");
}

SchemaRegistry::RelationRef SchemaRegistry::relation(std::string_view name) const {
  for (const auto& e : entities_)
    for (const auto& r : e.relations)
      if (r.name == name) return {&e, &r};
  throw Error(Errc::unknown_relation, "no relation '" + std::string(name) + "'");
}

SchemaRegistry::LinkLayout SchemaRegistry::link_layout(const RelationDescriptor& relation) const {
  const auto& link = entity(relation.link_entity);
  LinkLayout layout;
  layout.pk = link.primary_key_index();
  std::vector<std::size_t> fks;
  for (std::size_t i = 0; i < link.fields.size(); ++i)
    if (!link.fields[i].primary_key) fks.push_back(i);
  if (fks.size() != 2)
    throw Error(Errc::invalid_descriptor, "link entity " + link.name + " is malformed");
  layout.source_fk = fks[0];
  layout.target_fk = fks[1];
  return layout;
}

std::vector<Diagnostic> validate_schema(const SchemaRegistry& registry) {
  std::vector<Diagnostic> out;
  auto emit = [&](std::string code, const std::string& entity, const std::string& relation,
                  std::string message) {
    out.push_back({std::move(code), entity, relation, std::move(message)});
  };

  // relation names must be unique across the registry so views and links can
  // address them by bare name
  std::set<std::string_view> names;
  for (const auto& e : registry.entities())
    for (const auto& r : e.relations)
      if (!names.insert(r.name).second)
        emit("DuplicateRelationName", e.name, r.name,
             "relation name '" + r.name + "' is used more than once");

  std::set<std::string_view> used_links;
  for (const auto& e : registry.entities()) {
    for (const auto& r : e.relations) {
      const auto* target = registry.find_entity(r.target_entity);
      if (!target) {
        emit("UnresolvedTarget", e.name, r.name,
             "target entity '" + r.target_entity + "' is not registered");
        continue;
      }
      if (r.kind == RelationKind::one_to_many) {
        const auto* fk = target->find_field(r.foreign_key_field);
        if (!fk) {
          emit("MissingForeignKey", e.name, r.name,
               "foreign key '" + r.foreign_key_field + "' not found on " + target->name);
        } else if (fk->kind != e.primary_key().kind) {
          emit("ForeignKeyKindMismatch", e.name, r.name,
               "foreign key '" + fk->name + "' is " + value_kind_name(fk->kind) + " but " +
                   e.name + " keys are " + value_kind_name(e.primary_key().kind));
        }
        continue;
      }
      // many_to_many
      const auto* link = registry.find_entity(r.link_entity);
      if (!link) {
        emit("UnresolvedLink", e.name, r.name,
             "link entity '" + r.link_entity + "' is not registered");
        continue;
      }
      if (!used_links.insert(link->name).second)
        emit("MalformedLink", e.name, r.name,
             "link entity '" + link->name + "' serves more than one relation");
      std::vector<const FieldDescriptor*> fks;
      for (const auto& f : link->fields)
        if (!f.primary_key) fks.push_back(&f);
      if (fks.size() != 2) {
        emit("MalformedLink", e.name, r.name,
             "link entity '" + link->name + "' must hold exactly two foreign key fields, has " +
                 std::to_string(fks.size()));
        continue;
      }
      if (link->primary_key().kind != ValueKind::integer)
        emit("MalformedLink", e.name, r.name,
             "link entity '" + link->name + "' needs an integer primary key");
      if (fks[0]->nullable || fks[1]->nullable)
        emit("MalformedLink", e.name, r.name,
             "link entity '" + link->name + "' foreign keys must not be nullable");
      if (fks[0]->kind != e.primary_key().kind)
        emit("MalformedLink", e.name, r.name,
             "link field '" + fks[0]->name + "' does not match the " + e.name + " key kind");
      if (fks[1]->kind != target->primary_key().kind)
        emit("MalformedLink", e.name, r.name,
             "link field '" + fks[1]->name + "' does not match the " + target->name + " key kind");
    }
  }
  return out;
}

}  // namespace mstore
