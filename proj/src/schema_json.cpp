#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mstore/schema.hpp"

namespace mstore {

namespace {

using nlohmann::json;

[[noreturn]] void shape_error(const std::string& message) {
  throw Error(Errc::invalid_argument, "schema file: " + message);
}

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) shape_error(context + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed)
      if (it.key() == a) known = true;
    if (!known) shape_error("unknown key '" + it.key() + "' in " + context);
  }
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) shape_error(context + " is missing '" + key + "'");
  if (!obj[key].is_string()) shape_error("'" + std::string(key) + "' in " + context + " must be a string");
  return obj[key].get<std::string>();
}

bool get_flag(const json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key)) return false;
  if (!obj[key].is_boolean()) shape_error("'" + std::string(key) + "' in " + context + " must be a boolean");
  return obj[key].get<bool>();
}

FieldDescriptor parse_field(const json& j) {
  check_keys(j, "field", {"name", "kind", "pk", "nullable"});
  FieldDescriptor f;
  f.name = get_string(j, "name", "field");
  auto kind = value_kind_from_name(get_string(j, "kind", "field '" + f.name + "'"));
  if (!kind) shape_error("field '" + f.name + "' has an unknown kind");
  f.kind = *kind;
  f.primary_key = get_flag(j, "pk", "field '" + f.name + "'");
  f.nullable = get_flag(j, "nullable", "field '" + f.name + "'");
  return f;
}

RelationDescriptor parse_relation(const json& j) {
  check_keys(j, "relation", {"name", "kind", "target", "foreign_key", "link", "on_delete"});
  RelationDescriptor r;
  r.name = get_string(j, "name", "relation");
  std::string context = "relation '" + r.name + "'";
  std::string kind = get_string(j, "kind", context);
  if (kind == "one_to_many") {
    r.kind = RelationKind::one_to_many;
  } else if (kind == "many_to_many") {
    r.kind = RelationKind::many_to_many;
  } else {
    shape_error(context + " has unknown kind '" + kind + "'");
  }
  r.target_entity = get_string(j, "target", context);
  if (j.contains("foreign_key")) r.foreign_key_field = get_string(j, "foreign_key", context);
  if (j.contains("link")) r.link_entity = get_string(j, "link", context);
  if (j.contains("on_delete")) {
    std::string mode = get_string(j, "on_delete", context);
    if (mode == "restrict") {
      r.on_delete = OnDelete::restrict;
    } else if (mode == "cascade") {
      r.on_delete = OnDelete::cascade;
    } else {
      shape_error(context + " has unknown on_delete '" + mode + "'");
    }
  }
  return r;
}

EntityDescriptor parse_entity(const json& j) {
  check_keys(j, "entity", {"name", "confidentiality", "fields", "relations"});
  EntityDescriptor e;
  e.name = get_string(j, "name", "entity");
  std::string context = "entity '" + e.name + "'";
  if (j.contains("confidentiality")) {
    std::string c = get_string(j, "confidentiality", context);
    if (c == "public_ok") {
      e.confidentiality = Confidentiality::public_ok;
    } else if (c == "private_only") {
      e.confidentiality = Confidentiality::private_only;
    } else {
      shape_error(context + " has unknown confidentiality '" + c + "'");
    }
  }
  if (!j.contains("fields") || !j["fields"].is_array())
    shape_error(context + " needs a 'fields' array");
  for (const auto& f : j["fields"]) e.fields.push_back(parse_field(f));
  if (j.contains("relations")) {
    if (!j["relations"].is_array()) shape_error(context + " 'relations' must be an array");
    for (const auto& r : j["relations"]) e.relations.push_back(parse_relation(r));
  }
  return e;
}

StoreDescriptor parse_store(const json& j) {
  check_keys(j, "store", {"location", "privacy", "kind", "connection_hint"});
  StoreDescriptor s;
  s.location = get_string(j, "location", "store");
  std::string context = "store '" + s.location + "'";
  std::string privacy = get_string(j, "privacy", context);
  if (privacy == "public") {
    s.privacy = StorePrivacy::public_cloud;
  } else if (privacy == "private") {
    s.privacy = StorePrivacy::private_cloud;
  } else {
    shape_error(context + " has unknown privacy '" + privacy + "'");
  }
  if (j.contains("kind")) {
    std::string kind = get_string(j, "kind", context);
    if (kind == "embedded") {
      s.kind = StoreKind::embedded;
    } else if (kind == "external") {
      s.kind = StoreKind::external;
    } else {
      shape_error(context + " has unknown kind '" + kind + "'");
    }
  }
  if (j.contains("connection_hint")) {
    if (s.kind != StoreKind::external) shape_error(context + " is embedded; connection_hint is for external stores");
    s.connection_hint = get_string(j, "connection_hint", context);
  }
  return s;
}

}  // namespace

const char* value_kind_json_name(ValueKind kind) { return value_kind_name(kind); }

SchemaRegistry parse_schema_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    shape_error(std::string("not valid JSON: ") + e.what());
  }
  check_keys(doc, "schema document", {"entities", "stores"});
  SchemaRegistry registry;
  if (doc.contains("entities")) {
    if (!doc["entities"].is_array()) shape_error("'entities' must be an array");
    for (const auto& e : doc["entities"]) registry.register_entity(parse_entity(e));
  }
  if (doc.contains("stores")) {
    if (!doc["stores"].is_array()) shape_error("'stores' must be an array");
    for (const auto& s : doc["stores"]) registry.register_store(parse_store(s));
  }
  return registry;
}

SchemaRegistry load_schema_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, "cannot read schema file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema_json(buf.str());
}

}  // namespace mstore
