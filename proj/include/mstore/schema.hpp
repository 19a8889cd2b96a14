#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mstore/value.hpp"

namespace mstore {

using LocationId = std::string;

// Field name reserved for the per-record location attribute. Never a user field.
inline constexpr std::string_view kLocationAttribute = "__location";

enum class Confidentiality { public_ok, private_only };
enum class StorePrivacy { public_cloud, private_cloud };
enum class StoreKind { embedded, external };
enum class RelationKind { one_to_many, many_to_many };
enum class OnDelete { restrict, cascade };

struct FieldDescriptor {
  std::string name;
  ValueKind kind = ValueKind::integer;
  bool nullable = false;
  bool primary_key = false;
};

struct RelationDescriptor {
  std::string name;
  RelationKind kind = RelationKind::one_to_many;
  std::string target_entity;
  std::string foreign_key_field;  // one_to_many: FK column on the target entity
  std::string link_entity;        // many_to_many: entity holding the (source, target) pairs
  OnDelete on_delete = OnDelete::restrict;
};

struct EntityDescriptor {
  std::string name;
  Confidentiality confidentiality = Confidentiality::public_ok;
  std::vector<FieldDescriptor> fields;  // declaration order drives statement layout
  std::vector<RelationDescriptor> relations;

  const FieldDescriptor* find_field(std::string_view field) const;
  const FieldDescriptor& field(std::string_view field) const;  // throws unknown_field
  std::size_t field_index(std::string_view field) const;       // throws unknown_field
  const FieldDescriptor& primary_key() const;
  std::size_t primary_key_index() const;
};

struct StoreDescriptor {
  LocationId location;
  StorePrivacy privacy = StorePrivacy::private_cloud;
  StoreKind kind = StoreKind::embedded;
  std::string connection_hint;  // external stores only, opaque
};

struct Diagnostic {
  std::string code;  // UnresolvedTarget, MalformedLink, ...
  std::string entity;
  std::string relation;  // empty when the problem is entity-level
  std::string message;
};

// Declarative metadata registry. Mutable during setup; freeze() locks it for
// shared read-only use by the runtime.
class SchemaRegistry {
 public:
  // Validates the descriptor's own invariants. Cross-entity rules wait for
  // validate_schema so registration stays order-independent.
  void register_entity(EntityDescriptor descriptor);
  void register_store(StoreDescriptor store);

  // Checks all diagnostics pass, then locks the registry against mutation.
  void freeze();
  bool frozen() const { return frozen_; }

  const EntityDescriptor* find_entity(std::string_view name) const;
  const EntityDescriptor& entity(std::string_view name) const;  // throws unknown_entity
  const StoreDescriptor* find_store(const LocationId& location) const;
  const StoreDescriptor& store(const LocationId& location) const;  // throws unknown_location

  const std::vector<EntityDescriptor>& entities() const { return entities_; }
  const std::vector<StoreDescriptor>& stores() const { return stores_; }

  struct RelationRef {
    const EntityDescriptor* source = nullptr;
    const RelationDescriptor* relation = nullptr;
  };
  // Relation names resolve globally (validate_schema enforces uniqueness).
  RelationRef relation(std::string_view name) const;  // throws unknown_relation

  // For a well-formed link entity: indices of (pk, source FK, target FK).
  struct LinkLayout {
    std::size_t pk = 0;
    std::size_t source_fk = 0;
    std::size_t target_fk = 0;
  };
  LinkLayout link_layout(const RelationDescriptor& relation) const;

 private:
  std::vector<EntityDescriptor> entities_;
  std::vector<StoreDescriptor> stores_;
  bool frozen_ = false;
};

// Cross-entity diagnostics: relation targets resolve, FK kinds match, link
// entities are well-formed, relation names unique. Empty result == valid.
// Pure: identical registries yield identical diagnostics.
std::vector<Diagnostic> validate_schema(const SchemaRegistry& registry);

// Strict JSON schema file: unknown keys are rejected. Shape errors throw
// invalid_argument; descriptor-level violations throw their usual codes.
SchemaRegistry parse_schema_json(const std::string& text);
SchemaRegistry load_schema_file(const std::string& path);

const char* value_kind_json_name(ValueKind kind);

}  // namespace mstore
