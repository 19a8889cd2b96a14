#include "mstore/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mstore::harness {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void script_error(const std::string& message) {
  throw Error(Errc::invalid_argument, "workload script: " + message);
}

void check_keys(const ordered_json& obj, const std::string& context,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) script_error(context + " must be a JSON object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (auto a : allowed)
      if (it.key() == a) known = true;
    if (!known) script_error("unknown key '" + it.key() + "' in " + context);
  }
}

double get_number(const ordered_json& j, const std::string& context) {
  if (!j.is_number()) script_error(context + " must be a number");
  return j.get<double>();
}

// JSON literal -> Value, guided by the field's declared kind
Value json_to_value(const ordered_json& j, ValueKind kind, const std::string& context) {
  if (j.is_null()) return Value::null();
  switch (kind) {
    case ValueKind::integer:
      if (!j.is_number_integer()) script_error(context + " must be an integer");
      return Value::integer(j.get<std::int64_t>());
    case ValueKind::floating:
      if (!j.is_number()) script_error(context + " must be a number");
      return Value::floating(j.get<double>());
    case ValueKind::text:
      if (!j.is_string()) script_error(context + " must be a string");
      return Value::text(j.get<std::string>());
    case ValueKind::date:
      if (!j.is_string()) script_error(context + " must be a 'YYYY-MM-DD' string");
      return Value::date(j.get<std::string>());
    case ValueKind::boolean:
      if (!j.is_boolean()) script_error(context + " must be a boolean");
      return Value::boolean(j.get<bool>());
    case ValueKind::null: break;
  }
  script_error(context + " has no parseable kind");
}

ordered_json value_to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null: return nullptr;
    case ValueKind::integer: return v.as_integer();
    case ValueKind::floating: return v.as_floating();
    case ValueKind::text: return v.as_text();
    case ValueKind::date: return v.as_date().to_string();
    case ValueKind::boolean: return v.as_boolean();
  }
  return nullptr;
}

FilterExpr parse_filter(const ordered_json& j, const EntityDescriptor& entity) {
  if (!j.is_object() || !j.contains("op") || !j["op"].is_string())
    script_error("filter needs an 'op' string");
  std::string op = j["op"].get<std::string>();
  if (op == "true") {
    check_keys(j, "filter", {"op"});
    return filters::always();
  }
  if (op == "and" || op == "or") {
    check_keys(j, "filter", {"op", "args"});
    if (!j.contains("args") || !j["args"].is_array()) script_error("'" + op + "' needs an 'args' array");
    std::vector<FilterExpr> children;
    for (const auto& c : j["args"]) children.push_back(parse_filter(c, entity));
    return op == "and" ? filters::all_of(std::move(children)) : filters::any_of(std::move(children));
  }
  if (op == "not") {
    check_keys(j, "filter", {"op", "arg"});
    if (!j.contains("arg")) script_error("'not' needs an 'arg'");
    return filters::negate(parse_filter(j["arg"], entity));
  }
  check_keys(j, "filter", {"op", "field", "value"});
  static const std::map<std::string, CompareOp> ops = {
      {"eq", CompareOp::eq}, {"neq", CompareOp::neq}, {"lt", CompareOp::lt},
      {"le", CompareOp::le}, {"gt", CompareOp::gt},   {"ge", CompareOp::ge},
      {"like", CompareOp::like}};
  auto it = ops.find(op);
  if (it == ops.end()) script_error("unknown filter op '" + op + "'");
  if (!j.contains("field") || !j["field"].is_string()) script_error("comparison needs a 'field'");
  if (!j.contains("value")) script_error("comparison needs a 'value'");
  std::string field_name = j["field"].get<std::string>();
  const auto& field = entity.field(field_name);  // UnknownField surfaces as a domain error
  ValueKind kind = it->second == CompareOp::like ? ValueKind::text : field.kind;
  Value literal = json_to_value(j["value"], kind, "value for field '" + field_name + "'");
  return filters::cmp(field_name, it->second, std::move(literal));
}

QueryOptions parse_options(const ordered_json& op, const EntityDescriptor& entity) {
  QueryOptions options;
  if (op.contains("filter")) options.filter = parse_filter(op["filter"], entity);
  if (op.contains("sort")) {
    if (!op["sort"].is_array()) script_error("'sort' must be an array");
    for (const auto& s : op["sort"]) {
      check_keys(s, "sort entry", {"field", "dir"});
      if (!s.contains("field") || !s["field"].is_string()) script_error("sort entry needs a 'field'");
      SortSpec spec;
      spec.field = s["field"].get<std::string>();
      if (s.contains("dir")) {
        std::string dir = s["dir"].is_string() ? s["dir"].get<std::string>() : "";
        if (dir == "asc") {
          spec.direction = SortDirection::asc;
        } else if (dir == "desc") {
          spec.direction = SortDirection::desc;
        } else {
          script_error("sort dir must be 'asc' or 'desc'");
        }
      }
      options.sorts.push_back(std::move(spec));
    }
  }
  if (op.contains("limit")) {
    if (!op["limit"].is_number_integer() || op["limit"].get<std::int64_t>() < 0)
      script_error("'limit' must be a non-negative integer");
    options.limit = op["limit"].get<std::int64_t>();
  }
  if (op.contains("offset")) {
    if (!op["offset"].is_number_integer() || op["offset"].get<std::int64_t>() < 0)
      script_error("'offset' must be a non-negative integer");
    options.offset = op["offset"].get<std::int64_t>();
  }
  return options;
}

struct StoreConfig {
  std::optional<double> injected_delay;
  StoreMetrics metrics;
};

struct Workload {
  std::string schema_path_as_written;
  SchemaRegistry registry;
  std::map<LocationId, StoreConfig> stores;
  PolicyWeights policy;
  std::vector<ordered_json> ops;
};

ordered_json read_json_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::invalid_argument, std::string("cannot read ") + what + " '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ordered_json::parse(buf.str());
  } catch (const ordered_json::parse_error& e) {
    throw Error(Errc::invalid_argument,
                std::string(what) + " '" + path + "' is not valid JSON: " + e.what());
  }
}

Workload load_workload(const std::string& script_path) {
  ordered_json doc = read_json_file(script_path, "workload script");
  check_keys(doc, "workload script", {"schema", "stores", "policy", "ops"});
  if (!doc.contains("schema") || !doc["schema"].is_string())
    script_error("needs a 'schema' path");

  Workload w;
  w.schema_path_as_written = doc["schema"].get<std::string>();
  auto schema_path = std::filesystem::path(script_path).parent_path() / w.schema_path_as_written;
  w.registry = load_schema_file(schema_path.string());
  auto diagnostics = validate_schema(w.registry);
  if (!diagnostics.empty())
    script_error("schema has diagnostics: " + diagnostics.front().code + " " +
                 diagnostics.front().message);

  if (doc.contains("stores")) {
    if (!doc["stores"].is_object()) script_error("'stores' must map locations to configs");
    // every key is a location; validate against the registry
    for (auto it = doc["stores"].begin(); it != doc["stores"].end(); ++it) {
      if (!w.registry.find_store(it.key()))
        script_error("store '" + it.key() + "' is not in the schema");
      const auto& cfg = it.value();
      check_keys(cfg, "store '" + it.key() + "'",
                 {"injected_delay", "bandwidth", "server_load", "active_clients", "latency_ewma"});
      StoreConfig sc;
      if (cfg.contains("injected_delay"))
        sc.injected_delay = get_number(cfg["injected_delay"], "injected_delay");
      if (cfg.contains("bandwidth")) sc.metrics.bandwidth = get_number(cfg["bandwidth"], "bandwidth");
      if (cfg.contains("server_load"))
        sc.metrics.server_load = get_number(cfg["server_load"], "server_load");
      if (cfg.contains("active_clients")) {
        if (!cfg["active_clients"].is_number_integer())
          script_error("active_clients must be an integer");
        sc.metrics.active_clients = cfg["active_clients"].get<std::int64_t>();
      }
      if (cfg.contains("latency_ewma"))
        sc.metrics.latency_ewma = get_number(cfg["latency_ewma"], "latency_ewma");
      validate_metrics(sc.metrics);
      w.stores.emplace(it.key(), std::move(sc));
    }
  }

  if (doc.contains("policy")) {
    const auto& p = doc["policy"];
    check_keys(p, "'policy'", {"w_load", "w_clients", "ewma_alpha"});
    if (p.contains("w_load")) w.policy.w_load = get_number(p["w_load"], "w_load");
    if (p.contains("w_clients")) w.policy.w_clients = get_number(p["w_clients"], "w_clients");
    if (p.contains("ewma_alpha")) w.policy.ewma_alpha = get_number(p["ewma_alpha"], "ewma_alpha");
    validate_weights(w.policy);
  }

  if (!doc.contains("ops") || !doc["ops"].is_array()) script_error("needs an 'ops' array");
  static const std::set<std::string> kinds = {"insert", "select", "update", "delete",
                                              "link",   "unlink", "view",   "check"};
  for (const auto& op : doc["ops"]) {
    if (!op.is_object() || !op.contains("op") || !op["op"].is_string())
      script_error("every op needs an 'op' string");
    std::string kind = op["op"].get<std::string>();
    if (!kinds.count(kind)) script_error("unknown op kind '" + kind + "'");
    w.ops.push_back(op);
  }
  return w;
}

ordered_json decision_to_json(const PlacementDecision& decision) {
  ordered_json scores = ordered_json::object();
  for (const auto& [location, breakdown] : decision.scores) {
    scores[location] = {{"transfer", breakdown.transfer},
                        {"load", breakdown.load},
                        {"clients", breakdown.clients},
                        {"ewma", breakdown.ewma},
                        {"total", breakdown.total()}};
  }
  ordered_json out;
  out["chosen"] = decision.chosen;
  out["payload_bytes"] = decision.payload_bytes;
  out["eligible"] = decision.eligible;
  out["ineligible"] = decision.ineligible;
  out["scores"] = std::move(scores);
  return out;
}

ordered_json violations_to_json(const std::vector<IntegrityViolation>& violations) {
  ordered_json out = ordered_json::array();
  for (const auto& v : violations)
    out.push_back({{"kind", violation_kind_name(v.kind)},
                   {"relation", v.relation},
                   {"key", value_to_json(v.offending_key)},
                   {"store", v.store}});
  return out;
}

// Executes one op; fills `entry` with the outcome. Throws only on unexpected
// internal trouble; domain errors are captured into the entry.
struct OpRunner {
  Runtime& runtime;

  ordered_json run(const ordered_json& op) {
    std::string kind = op["op"].get<std::string>();
    if (kind == "insert") return run_insert(op);
    if (kind == "select") return run_select(op);
    if (kind == "update") return run_update(op);
    if (kind == "delete") return run_delete(op);
    if (kind == "link") return run_link(op);
    if (kind == "unlink") return run_unlink(op);
    if (kind == "view") return run_view(op);
    return run_check(op);
  }

  const EntityDescriptor& entity_of(const ordered_json& op) {
    if (!op.contains("entity") || !op["entity"].is_string()) script_error("op needs an 'entity'");
    return runtime.registry().entity(op["entity"].get<std::string>());
  }

  std::map<std::string, Value> parse_values(const ordered_json& j, const EntityDescriptor& entity,
                                            const char* what) {
    if (!j.is_object()) script_error(std::string(what) + " must be an object");
    std::map<std::string, Value> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& field = entity.field(it.key());
      out.emplace(it.key(), json_to_value(it.value(), field.kind, "field '" + it.key() + "'"));
    }
    return out;
  }

  Value parse_pk(const ordered_json& op, const char* key, const EntityDescriptor& entity) {
    if (!op.contains(key)) script_error(std::string("op needs '") + key + "'");
    return json_to_value(op[key], entity.primary_key().kind, key);
  }

  ordered_json run_insert(const ordered_json& op) {
    check_keys(op, "insert op", {"op", "entity", "values", "location", "expect_error"});
    const auto& entity = entity_of(op);
    if (!op.contains("values")) script_error("insert needs 'values'");
    Record record;
    record.entity = entity.name;
    record.values = parse_values(op["values"], entity, "'values'");
    if (op.contains("location")) record.location = op["location"].get<std::string>();
    InsertOutcome outcome = runtime.insert_with_decision(std::move(record));
    ordered_json result;
    result["pk"] = value_to_json(outcome.pk);
    result["location"] = outcome.location;
    ordered_json entry;
    entry["result"] = std::move(result);
    if (outcome.decision) entry["placement"] = decision_to_json(*outcome.decision);
    return entry;
  }

  ordered_json run_select(const ordered_json& op) {
    check_keys(op, "select op", {"op", "entity", "filter", "sort", "limit", "offset", "expect_error"});
    const auto& entity = entity_of(op);
    auto records = runtime.select(entity.name, parse_options(op, entity));
    ordered_json entry;
    entry["result"] = {{"rows", records.size()}};
    return entry;
  }

  ordered_json run_update(const ordered_json& op) {
    check_keys(op, "update op", {"op", "entity", "pk", "location", "set", "expect_error"});
    const auto& entity = entity_of(op);
    if (!op.contains("location") || !op["location"].is_string())
      script_error("update needs a 'location'");
    if (!op.contains("set")) script_error("update needs 'set'");
    Record record;
    record.entity = entity.name;
    record.location = op["location"].get<std::string>();
    record.values = parse_values(op["set"], entity, "'set'");
    record.values.emplace(entity.primary_key().name, parse_pk(op, "pk", entity));
    ordered_json entry;
    entry["result"] = {{"affected", runtime.update(record)}};
    return entry;
  }

  ordered_json run_delete(const ordered_json& op) {
    check_keys(op, "delete op", {"op", "entity", "pk", "location", "expect_error"});
    const auto& entity = entity_of(op);
    if (!op.contains("location") || !op["location"].is_string())
      script_error("delete needs a 'location'");
    auto affected = runtime.remove(entity.name, parse_pk(op, "pk", entity),
                                   op["location"].get<std::string>());
    ordered_json entry;
    entry["result"] = {{"affected", affected}};
    return entry;
  }

  SchemaRegistry::RelationRef relation_of(const ordered_json& op) {
    if (!op.contains("relation") || !op["relation"].is_string())
      script_error("op needs a 'relation'");
    return runtime.registry().relation(op["relation"].get<std::string>());
  }

  ordered_json run_link(const ordered_json& op) {
    check_keys(op, "link op", {"op", "relation", "source_pk", "target_pk", "location", "expect_error"});
    auto ref = relation_of(op);
    if (!op.contains("location") || !op["location"].is_string())
      script_error("link needs a 'location'");
    const auto& target = runtime.registry().entity(ref.relation->target_entity);
    Value source_pk = json_to_value(op.at("source_pk"), ref.source->primary_key().kind, "source_pk");
    Value target_pk = json_to_value(op.at("target_pk"), target.primary_key().kind, "target_pk");
    runtime.link(ref.relation->name, source_pk, target_pk, op["location"].get<std::string>());
    ordered_json entry;
    entry["result"] = {{"linked", true}};
    return entry;
  }

  ordered_json run_unlink(const ordered_json& op) {
    check_keys(op, "unlink op", {"op", "relation", "source_pk", "target_pk", "expect_error"});
    auto ref = relation_of(op);
    const auto& target = runtime.registry().entity(ref.relation->target_entity);
    Value source_pk = json_to_value(op.at("source_pk"), ref.source->primary_key().kind, "source_pk");
    Value target_pk = json_to_value(op.at("target_pk"), target.primary_key().kind, "target_pk");
    ordered_json entry;
    entry["result"] = {{"affected", runtime.unlink(ref.relation->name, source_pk, target_pk)}};
    return entry;
  }

  ordered_json run_view(const ordered_json& op) {
    check_keys(op, "view op", {"op", "relation", "filter", "sort", "limit", "offset", "expect_error"});
    auto ref = relation_of(op);
    auto views = runtime.select_view(ref.relation->name, parse_options(op, *ref.source));
    ordered_json entry;
    entry["result"] = {{"rows", views.size()}};
    return entry;
  }

  ordered_json run_check(const ordered_json& op) {
    check_keys(op, "check op", {"op", "expect_error"});
    auto violations = runtime.check_integrity();
    ordered_json entry;
    entry["result"] = {{"violations", violations.size()}};
    entry["violations"] = violations_to_json(violations);
    return entry;
  }
};

}  // namespace

int cmd_validate(const std::string& schema_path, std::ostream& out) {
  SchemaRegistry registry;
  try {
    registry = load_schema_file(schema_path);
  } catch (const Error& e) {
    if (e.code() == Errc::invalid_argument) {
      out << "ERROR schema: " << e.what() << "\n";
      return kExitInput;
    }
    // a structurally sound file whose descriptors break their own invariants
    out << "ERROR schema: " << e.what() << "\n";
    return kExitDomain;
  }
  auto diagnostics = validate_schema(registry);
  for (const auto& d : diagnostics) {
    out << "ERROR " << d.entity;
    if (!d.relation.empty()) out << "." << d.relation;
    out << ": " << d.code << ": " << d.message << "\n";
  }
  return diagnostics.empty() ? kExitOk : kExitDomain;
}

int cmd_run(const std::string& script_path, const std::optional<std::string>& report_path,
            bool measure_wall_clock, std::ostream& out, std::ostream& err) {
  Workload workload;
  try {
    workload = load_workload(script_path);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  int exit_code = kExitOk;
  ordered_json report;
  report["report_version"] = 1;
  report["script"] = std::filesystem::path(script_path).filename().string();
  report["schema"] = workload.schema_path_as_written;
  report["ops"] = ordered_json::array();

  try {
    workload.registry.freeze();
    Runtime runtime(workload.registry, workload.policy);
    for (const auto& location : runtime.open_locations()) {
      auto it = workload.stores.find(location);
      if (it != workload.stores.end()) runtime.set_metrics(location, it->second.metrics);
      if (!measure_wall_clock) {
        double delay = 0.0;  // exact delays keep replays byte-identical
        if (it != workload.stores.end() && it->second.injected_delay)
          delay = *it->second.injected_delay;
        runtime.set_injected_delay(location, delay);
      }
    }

    OpRunner runner{runtime};
    for (std::size_t i = 0; i < workload.ops.size(); ++i) {
      const auto& op = workload.ops[i];
      bool expect_error = false;
      if (op.contains("expect_error")) {
        if (!op["expect_error"].is_boolean()) script_error("'expect_error' must be a boolean");
        expect_error = op["expect_error"].get<bool>();
      }
      ordered_json entry;
      entry["index"] = i;
      entry["op"] = op["op"];
      try {
        ordered_json outcome = runner.run(op);
        if (expect_error) {
          entry["status"] = "unexpected_success";
          for (auto it = outcome.begin(); it != outcome.end(); ++it) entry[it.key()] = it.value();
          report["ops"].push_back(std::move(entry));
          err << "op " << i << " was expected to fail but succeeded\n";
          exit_code = kExitDomain;
          break;
        }
        entry["status"] = "ok";
        for (auto it = outcome.begin(); it != outcome.end(); ++it) entry[it.key()] = it.value();
        report["ops"].push_back(std::move(entry));
      } catch (const Error& e) {
        entry["status"] = expect_error ? "expected_error" : "error";
        entry["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
        report["ops"].push_back(std::move(entry));
        if (!expect_error) {
          err << "op " << i << " failed: " << e.what() << "\n";
          exit_code = kExitDomain;
          break;
        }
      }
    }

    if (exit_code == kExitOk) {
      report["integrity"] = violations_to_json(runtime.check_integrity());
      ordered_json stores = ordered_json::object();
      for (const auto& location : runtime.open_locations()) {
        auto t = runtime.telemetry(location);
        stores[location] = {{"op_count", t.op_count}, {"mean_latency", t.mean_latency()}};
      }
      report["stores"] = std::move(stores);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInput;
  }

  std::string text = report.dump(2);
  text += "\n";
  if (report_path) {
    std::ofstream file(*report_path, std::ios::binary);
    if (!file) {
      err << "cannot write report to '" << *report_path << "'\n";
      return kExitInput;
    }
    file << text;
  } else {
    out << text;
  }
  return exit_code;
}

int cmd_explain(const std::string& script_path, const std::string& entity_name,
                std::int64_t payload_bytes, std::ostream& out, std::ostream& err) {
  Workload workload;
  try {
    workload = load_workload(script_path);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitInput;
  }
  try {
    const auto& entity = workload.registry.entity(entity_name);
    std::map<LocationId, StoreMetrics> metrics;
    for (const auto& store : workload.registry.stores()) {
      auto it = workload.stores.find(store.location);
      metrics.emplace(store.location,
                      it == workload.stores.end() ? StoreMetrics{} : it->second.metrics);
    }
    PlacementDecision decision =
        choose_location(workload.registry, entity, payload_bytes, metrics, workload.policy);
    char line[256];
    for (const auto& location : decision.eligible) {
      const auto& b = decision.scores.at(location);
      std::snprintf(line, sizeof line, "%s\t%.6f\ttransfer=%.6f load=%.6f clients=%.6f ewma=%.6f",
                    location.c_str(), b.total(), b.transfer, b.load, b.clients, b.ewma);
      out << line;
      if (location == decision.chosen) out << "\t*";
      out << "\n";
    }
    for (const auto& location : decision.ineligible)
      out << location << "\tineligible\tconfidentiality\n";
    return kExitOk;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitDomain;
  }
}

}  // namespace mstore::harness
