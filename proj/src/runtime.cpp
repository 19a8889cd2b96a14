#include "mstore/runtime.hpp"

#include <algorithm>
#include <set>

namespace mstore {

const char* violation_kind_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::dangling_fk: return "dangling_fk";
    case ViolationKind::dangling_link: return "dangling_link";
    case ViolationKind::duplicate_link: return "duplicate_link";
  }
  return "?";
}

const Value& Record::value(std::string_view field) const {
  auto it = values.find(std::string(field));
  if (it == values.end())
    throw Error(Errc::unknown_field, "record has no field '" + std::string(field) + "'");
  return it->second;
}

namespace {

void sort_records(std::vector<Record>& records, const std::vector<SortSpec>& sorts) {
  if (sorts.empty()) return;
  std::stable_sort(records.begin(), records.end(), [&](const Record& a, const Record& b) {
    for (const auto& s : sorts) {
      int c = compare_values(a.value(s.field), b.value(s.field));
      if (c != 0) return s.direction == SortDirection::asc ? c < 0 : c > 0;
    }
    return false;
  });
}

void paginate_records(std::vector<Record>& records, const std::optional<std::int64_t>& offset,
                      const std::optional<std::int64_t>& limit) {
  if (offset) {
    auto skip = std::min<std::size_t>(records.size(), static_cast<std::size_t>(*offset));
    records.erase(records.begin(), records.begin() + static_cast<std::ptrdiff_t>(skip));
  }
  if (limit && records.size() > static_cast<std::size_t>(*limit))
    records.resize(static_cast<std::size_t>(*limit));
}

std::string visit_key(const EntityDescriptor& entity, const Value& pk) {
  return entity.name + "\x1f" + pk.to_string();
}

}  // namespace

Runtime::Runtime(SchemaRegistry registry, PolicyWeights weights)
    : registry_(std::move(registry)), weights_(weights) {
  validate_weights(weights_);
  if (!registry_.frozen()) registry_.freeze();
  if (registry_.stores().empty())
    throw Error(Errc::unknown_location, "registry has no stores");
  for (const auto& s : registry_.stores()) {
    if (s.kind != StoreKind::embedded) continue;  // external stores stay descriptor-level stubs
    stores_.push_back(open_store(registry_, s.location));
    metrics_.emplace(s.location, StoreMetrics{});
    telemetry_.emplace(s.location, StoreTelemetry{});
  }
  if (stores_.empty())
    throw Error(Errc::unsupported_store_kind, "registry has no embedded store to open");
}

std::vector<LocationId> Runtime::open_locations() const {
  std::vector<LocationId> out;
  out.reserve(stores_.size());
  for (const auto& s : stores_) out.push_back(s->location());
  return out;
}

StoreHandle& Runtime::store(const LocationId& location) {
  for (const auto& s : stores_)
    if (s->location() == location) return *s;
  throw Error(Errc::unknown_location, "no open store '" + location + "'");
}

ExecResult Runtime::exec_measured(StoreHandle& handle, const Statement& statement) {
  Measurement m = handle.measure(statement);
  {
    std::lock_guard lock(metrics_mu_);
    auto& t = telemetry_[handle.location()];
    t.op_count += 1;
    t.latency_sum += m.latency_seconds;
    auto& metrics = metrics_[handle.location()];
    metrics = record_observation(metrics, m.latency_seconds, weights_);
  }
  return std::move(m.result);
}

Record Runtime::row_to_record(const EntityDescriptor& entity, const Row& row,
                              const LocationId& location) const {
  Record record;
  record.entity = entity.name;
  record.location = location;
  for (std::size_t i = 0; i < entity.fields.size(); ++i)
    record.values.emplace(entity.fields[i].name, row[i]);
  return record;
}

std::vector<Record> Runtime::fan_out_select(std::string_view entity_name,
                                            const QueryOptions& options) {
  const auto& entity = registry_.entity(entity_name);
  QueryOptions per_store;
  per_store.filter = options.filter;
  per_store.sorts = options.sorts;
  // offset/limit must wait for the global merge or rows would be dropped
  Statement stmt = build_select(registry_, entity.name, per_store);
  std::vector<Record> merged;
  for (const auto& handle : stores_) {
    ExecResult result = exec_measured(*handle, stmt);
    for (const auto& row : result.rows->rows)
      merged.push_back(row_to_record(entity, row, handle->location()));
  }
  sort_records(merged, options.sorts);
  paginate_records(merged, options.offset, options.limit);
  return merged;
}

std::vector<Record> Runtime::select(std::string_view entity, const QueryOptions& options) {
  std::shared_lock lock(op_mu_);
  return fan_out_select(entity, options);
}

std::optional<Runtime::FoundRow> Runtime::find_by_pk(const EntityDescriptor& entity,
                                                     const Value& pk) {
  QueryOptions options;
  options.filter = filters::eq(entity.primary_key().name, pk);
  Statement stmt = build_select(registry_, entity.name, options);
  for (const auto& handle : stores_) {
    ExecResult result = exec_measured(*handle, stmt);
    if (!result.rows->rows.empty())
      return FoundRow{handle.get(), row_to_record(entity, result.rows->rows.front(), handle->location())};
  }
  return std::nullopt;
}

namespace {

struct LinkContext {
  const EntityDescriptor* source = nullptr;
  const EntityDescriptor* target = nullptr;
  const RelationDescriptor* relation = nullptr;
};

// the many_to_many relation served by `entity`, if it is a link entity
std::optional<LinkContext> link_relation_of(const SchemaRegistry& registry,
                                            const EntityDescriptor& entity) {
  for (const auto& e : registry.entities())
    for (const auto& r : e.relations)
      if (r.kind == RelationKind::many_to_many && r.link_entity == entity.name)
        return LinkContext{&e, &registry.entity(r.target_entity), &r};
  return std::nullopt;
}

}  // namespace

void Runtime::check_references(const EntityDescriptor& entity,
                               const std::map<std::string, Value>& values, const Value& self_pk,
                               bool is_update) {
  // every one_to_many foreign key present in `values` must point at a parent
  for (const auto& source : registry_.entities()) {
    for (const auto& relation : source.relations) {
      if (relation.kind != RelationKind::one_to_many || relation.target_entity != entity.name)
        continue;
      auto it = values.find(relation.foreign_key_field);
      if (it == values.end() || it->second.is_null()) continue;
      if (!find_by_pk(source, it->second))
        throw Error(Errc::constraint_violation,
                    "foreign key " + relation.foreign_key_field + "=" + it->second.to_string() +
                        " has no parent " + source.name + " row");
    }
  }

  // link rows must reference live endpoints and stay pairwise unique
  auto link = link_relation_of(registry_, entity);
  if (!link) return;
  auto layout = registry_.link_layout(*link->relation);
  const auto& src_field = entity.fields[layout.source_fk].name;
  const auto& tgt_field = entity.fields[layout.target_fk].name;

  std::map<std::string, Value> merged;
  if (is_update) {
    // compose the post-update pair from the current row
    auto current = find_by_pk(entity, self_pk);
    if (!current) return;  // row vanished; the update will hit nothing
    merged = current->record.values;
  }
  for (const auto& [k, v] : values) merged[k] = v;

  const Value& src = merged.at(src_field);
  const Value& tgt = merged.at(tgt_field);
  if (!find_by_pk(*link->source, src))
    throw Error(Errc::constraint_violation,
                "link source " + src.to_string() + " has no " + link->source->name + " row");
  if (!find_by_pk(*link->target, tgt))
    throw Error(Errc::constraint_violation,
                "link target " + tgt.to_string() + " has no " + link->target->name + " row");

  std::size_t pk_index = entity.primary_key_index();
  for (const auto& handle : stores_) {
    for (const auto& row : handle->table_rows(entity.name)) {
      if (compare_values(row[pk_index], self_pk) == 0) continue;
      if (compare_values(row[layout.source_fk], src) == 0 &&
          compare_values(row[layout.target_fk], tgt) == 0)
        throw Error(Errc::duplicate_link, "pair (" + src.to_string() + ", " + tgt.to_string() +
                                              ") already linked in " + entity.name);
    }
  }
}

void Runtime::ensure_placeable(const EntityDescriptor& entity, const StoreDescriptor& store) const {
  if (entity.confidentiality == Confidentiality::private_only &&
      store.privacy != StorePrivacy::private_cloud)
    throw Error(Errc::confidentiality_violation,
                "entity '" + entity.name + "' is private_only; store '" + store.location +
                    "' is public");
}

Value Runtime::insert(Record record) { return insert_with_decision(std::move(record)).pk; }

InsertOutcome Runtime::insert_with_decision(Record record) {
  std::unique_lock lock(op_mu_);
  const auto& entity = registry_.entity(record.entity);
  Statement stmt = build_insert(registry_, entity.name, record.values);
  const Value& pk = record.value(entity.primary_key().name);

  if (auto existing = find_by_pk(entity, pk))
    throw Error(Errc::constraint_violation,
                "primary key " + pk.to_string() + " already present in store '" +
                    existing->record.location.value() + "'");
  check_references(entity, record.values, pk, /*is_update=*/false);

  InsertOutcome outcome;
  outcome.pk = pk;
  if (record.location) {
    const auto& descriptor = registry_.store(*record.location);
    if (descriptor.kind != StoreKind::embedded)
      throw Error(Errc::unsupported_store_kind,
                  "store '" + *record.location + "' is external");
    ensure_placeable(entity, descriptor);
    outcome.location = *record.location;
  } else {
    auto payload = static_cast<std::int64_t>(serialized_size(stmt.params));
    PlacementDecision decision;
    {
      std::lock_guard metrics_lock(metrics_mu_);
      decision = choose_location(registry_, entity, payload, metrics_, weights_);
    }
    outcome.location = decision.chosen;
    outcome.decision = std::move(decision);
  }
  exec_measured(store(outcome.location), stmt);
  return outcome;
}

std::int64_t Runtime::update(const Record& record) {
  std::unique_lock lock(op_mu_);
  const auto& entity = registry_.entity(record.entity);
  if (!record.location)
    throw Error(Errc::missing_location, "update needs the record's location");
  const auto& pk_field = entity.primary_key().name;
  auto pk_it = record.values.find(pk_field);
  if (pk_it == record.values.end() || pk_it->second.is_null())
    throw Error(Errc::missing_field, "update needs the primary key '" + pk_field + "'");

  std::map<std::string, Value> changes = record.values;
  changes.erase(pk_field);
  Statement stmt = build_update(registry_, entity.name, changes, filters::eq(pk_field, pk_it->second));
  check_references(entity, changes, pk_it->second, /*is_update=*/true);
  ExecResult result = exec_measured(store(*record.location), stmt);
  return result.affected;
}

std::vector<Record> Runtime::children_of(const RelationDescriptor& relation,
                                         const Value& parent_pk) {
  const auto& target = registry_.entity(relation.target_entity);
  QueryOptions options;
  options.filter = filters::eq(relation.foreign_key_field, parent_pk);
  Statement stmt = build_select(registry_, target.name, options);
  std::vector<Record> out;
  for (const auto& handle : stores_) {
    ExecResult result = exec_measured(*handle, stmt);
    for (const auto& row : result.rows->rows)
      out.push_back(row_to_record(target, row, handle->location()));
  }
  return out;
}

std::vector<Record> Runtime::link_rows_touching(const RelationDescriptor& relation,
                                                bool source_side, const Value& pk) {
  const auto& link = registry_.entity(relation.link_entity);
  auto layout = registry_.link_layout(relation);
  const auto& field = link.fields[source_side ? layout.source_fk : layout.target_fk].name;
  QueryOptions options;
  options.filter = filters::eq(field, pk);
  Statement stmt = build_select(registry_, link.name, options);
  std::vector<Record> out;
  for (const auto& handle : stores_) {
    ExecResult result = exec_measured(*handle, stmt);
    for (const auto& row : result.rows->rows)
      out.push_back(row_to_record(link, row, handle->location()));
  }
  return out;
}

std::int64_t Runtime::remove(std::string_view entity_name, const Value& pk,
                             const LocationId& location) {
  std::unique_lock lock(op_mu_);
  const auto& entity = registry_.entity(entity_name);
  std::vector<std::string> visited;
  std::vector<CompletedDeletion> completed;
  try {
    return remove_locked(entity, pk, location, visited, completed);
  } catch (const PartialCascadeError&) {
    throw;
  } catch (const Error& e) {
    if (!completed.empty()) throw PartialCascadeError(e.what(), std::move(completed));
    throw;
  }
}

std::int64_t Runtime::remove_locked(const EntityDescriptor& entity, const Value& pk,
                                    const LocationId& location,
                                    std::vector<std::string>& visited,
                                    std::vector<CompletedDeletion>& completed) {
  StoreHandle& handle = store(location);
  const auto& pk_field = entity.primary_key().name;

  QueryOptions probe;
  probe.filter = filters::eq(pk_field, pk);
  Statement select_stmt = build_select(registry_, entity.name, probe);
  if (exec_measured(handle, select_stmt).rows->rows.empty()) return 0;

  std::string key = visit_key(entity, pk);
  if (std::find(visited.begin(), visited.end(), key) != visited.end()) return 0;
  visited.push_back(key);

  // restrict checks first: at top level nothing has been touched yet, so a
  // violation aborts with the stores byte-identical
  for (const auto& relation : entity.relations) {
    if (relation.kind != RelationKind::one_to_many) continue;
    if (relation.on_delete != OnDelete::restrict) continue;
    if (!children_of(relation, pk).empty())
      throw Error(Errc::restrict_violation, "relation '" + relation.name + "' still has rows for " +
                                                entity.name + " " + pk.to_string());
  }
  for (const auto& source : registry_.entities()) {
    for (const auto& relation : source.relations) {
      if (relation.kind != RelationKind::many_to_many || relation.on_delete != OnDelete::restrict)
        continue;
      bool source_side = source.name == entity.name;
      bool target_side = relation.target_entity == entity.name;
      if (!source_side && !target_side) continue;
      if (source_side && !link_rows_touching(relation, true, pk).empty())
        throw Error(Errc::restrict_violation,
                    "relation '" + relation.name + "' still links " + entity.name + " " + pk.to_string());
      if (target_side && !link_rows_touching(relation, false, pk).empty())
        throw Error(Errc::restrict_violation,
                    "relation '" + relation.name + "' still links " + entity.name + " " + pk.to_string());
    }
  }

  // cascade order: children, then link rows, then the row itself
  for (const auto& relation : entity.relations) {
    if (relation.kind != RelationKind::one_to_many || relation.on_delete != OnDelete::cascade)
      continue;
    const auto& target = registry_.entity(relation.target_entity);
    for (const auto& child : children_of(relation, pk))
      remove_locked(target, child.value(target.primary_key().name), *child.location, visited,
                    completed);
  }
  for (const auto& source : registry_.entities()) {
    for (const auto& relation : source.relations) {
      if (relation.kind != RelationKind::many_to_many || relation.on_delete != OnDelete::cascade)
        continue;
      bool source_side = source.name == entity.name;
      bool target_side = relation.target_entity == entity.name;
      if (!source_side && !target_side) continue;
      const auto& link = registry_.entity(relation.link_entity);
      for (bool side : {true, false}) {
        if (side && !source_side) continue;
        if (!side && !target_side) continue;
        for (const auto& row : link_rows_touching(relation, side, pk))
          remove_locked(link, row.value(link.primary_key().name), *row.location, visited,
                        completed);
      }
    }
  }

  Statement delete_stmt = build_delete(registry_, entity.name, filters::eq(pk_field, pk));
  ExecResult result = exec_measured(handle, delete_stmt);
  if (result.affected > 0)
    completed.push_back({entity.name, pk.to_string(), location});
  return result.affected;
}

std::vector<ViewRow> Runtime::select_view(std::string_view relation_name,
                                          const QueryOptions& parent_options) {
  std::shared_lock lock(op_mu_);
  auto ref = registry_.relation(relation_name);
  const auto& source = *ref.source;
  const auto& relation = *ref.relation;
  std::vector<Record> parents = fan_out_select(source.name, parent_options);

  std::vector<ViewRow> out;
  out.reserve(parents.size());
  const auto& source_pk_field = source.primary_key().name;
  for (auto& parent : parents) {
    ViewRow view;
    view.kind = relation.kind;
    const Value& parent_pk = parent.value(source_pk_field);
    if (relation.kind == RelationKind::one_to_many) {
      const auto& target = registry_.entity(relation.target_entity);
      const auto& target_pk_field = target.primary_key().name;
      view.children = children_of(relation, parent_pk);
      std::stable_sort(view.children.begin(), view.children.end(),
                       [&](const Record& a, const Record& b) {
                         return compare_values(a.value(target_pk_field), b.value(target_pk_field)) < 0;
                       });
    } else {
      const auto& target = registry_.entity(relation.target_entity);
      const auto& link = registry_.entity(relation.link_entity);
      auto layout = registry_.link_layout(relation);
      const auto& link_pk_field = link.primary_key().name;
      const auto& target_fk_field = link.fields[layout.target_fk].name;
      auto link_rows = link_rows_touching(relation, true, parent_pk);
      for (auto& link_row : link_rows) {
        auto found = find_by_pk(target, link_row.value(target_fk_field));
        if (!found) continue;  // dangling links are check_integrity's business
        view.link_pairs.emplace_back(std::move(link_row), std::move(found->record));
      }
      const auto& target_pk_field = target.primary_key().name;
      std::stable_sort(view.link_pairs.begin(), view.link_pairs.end(),
                       [&](const auto& a, const auto& b) {
                         int c = compare_values(a.second.value(target_pk_field),
                                                b.second.value(target_pk_field));
                         if (c != 0) return c < 0;
                         return compare_values(a.first.value(link_pk_field),
                                               b.first.value(link_pk_field)) < 0;
                       });
    }
    view.parent = std::move(parent);
    out.push_back(std::move(view));
  }
  return out;
}

Value Runtime::next_link_pk(const EntityDescriptor& link_entity) {
  std::size_t pk_index = link_entity.primary_key_index();
  std::int64_t max_pk = 0;
  for (const auto& handle : stores_)
    for (const auto& row : handle->table_rows(link_entity.name))
      max_pk = std::max(max_pk, row[pk_index].as_integer());
  return Value::integer(max_pk + 1);
}

void Runtime::link(std::string_view relation_name, const Value& source_pk, const Value& target_pk,
                   const LocationId& location) {
  std::unique_lock lock(op_mu_);
  auto ref = registry_.relation(relation_name);
  if (ref.relation->kind != RelationKind::many_to_many)
    throw Error(Errc::not_many_to_many, "relation '" + std::string(relation_name) + "' is one_to_many");
  const auto& source = *ref.source;
  const auto& target = registry_.entity(ref.relation->target_entity);
  const auto& link_entity = registry_.entity(ref.relation->link_entity);
  auto layout = registry_.link_layout(*ref.relation);

  if (!find_by_pk(source, source_pk))
    throw Error(Errc::dangling_endpoint,
                "no " + source.name + " row with key " + source_pk.to_string());
  if (!find_by_pk(target, target_pk))
    throw Error(Errc::dangling_endpoint,
                "no " + target.name + " row with key " + target_pk.to_string());

  for (const auto& handle : stores_) {
    for (const auto& row : handle->table_rows(link_entity.name)) {
      if (compare_values(row[layout.source_fk], source_pk) == 0 &&
          compare_values(row[layout.target_fk], target_pk) == 0)
        throw Error(Errc::duplicate_link, "pair (" + source_pk.to_string() + ", " +
                                              target_pk.to_string() + ") already linked");
    }
  }

  Record link_record;
  link_record.entity = link_entity.name;
  link_record.values.emplace(link_entity.fields[layout.pk].name, next_link_pk(link_entity));
  link_record.values.emplace(link_entity.fields[layout.source_fk].name, source_pk);
  link_record.values.emplace(link_entity.fields[layout.target_fk].name, target_pk);

  Statement stmt = build_insert(registry_, link_entity.name, link_record.values);
  const auto& descriptor = registry_.store(location);
  if (descriptor.kind != StoreKind::embedded)
    throw Error(Errc::unsupported_store_kind, "store '" + location + "' is external");
  ensure_placeable(link_entity, descriptor);
  exec_measured(store(location), stmt);
}

std::int64_t Runtime::unlink(std::string_view relation_name, const Value& source_pk,
                             const Value& target_pk) {
  std::unique_lock lock(op_mu_);
  auto ref = registry_.relation(relation_name);
  if (ref.relation->kind != RelationKind::many_to_many)
    throw Error(Errc::not_many_to_many, "relation '" + std::string(relation_name) + "' is one_to_many");
  const auto& link_entity = registry_.entity(ref.relation->link_entity);
  auto layout = registry_.link_layout(*ref.relation);

  FilterExpr filter = filters::all_of({
      filters::eq(link_entity.fields[layout.source_fk].name, source_pk),
      filters::eq(link_entity.fields[layout.target_fk].name, target_pk),
  });
  Statement stmt = build_delete(registry_, link_entity.name, filter);
  std::int64_t removed = 0;
  for (const auto& handle : stores_) removed += exec_measured(*handle, stmt).affected;
  return removed;
}

std::vector<IntegrityViolation> Runtime::check_integrity() {
  std::shared_lock lock(op_mu_);
  std::vector<IntegrityViolation> out;

  // pk index per entity, assembled once: entity -> set of rendered keys
  std::map<std::string, std::set<std::string>> keys;
  for (const auto& entity : registry_.entities()) {
    auto& bucket = keys[entity.name];
    std::size_t pk_index = entity.primary_key_index();
    for (const auto& handle : stores_)
      for (const auto& row : handle->table_rows(entity.name))
        bucket.insert(row[pk_index].to_string());
  }

  for (const auto& entity : registry_.entities()) {
    for (const auto& relation : entity.relations) {
      if (relation.kind == RelationKind::one_to_many) {
        const auto& target = registry_.entity(relation.target_entity);
        std::size_t fk = target.field_index(relation.foreign_key_field);
        std::size_t target_pk = target.primary_key_index();
        const auto& parents = keys[entity.name];
        for (const auto& handle : stores_) {
          for (const auto& row : handle->table_rows(target.name)) {
            if (row[fk].is_null()) continue;
            if (!parents.count(row[fk].to_string()))
              out.push_back({ViolationKind::dangling_fk, relation.name, row[target_pk],
                             handle->location()});
          }
        }
        continue;
      }
      const auto& link = registry_.entity(relation.link_entity);
      auto layout = registry_.link_layout(relation);
      const auto& sources = keys[entity.name];
      const auto& targets = keys[relation.target_entity];
      std::set<std::string> seen_pairs;
      for (const auto& handle : stores_) {
        for (const auto& row : handle->table_rows(link.name)) {
          const Value& src = row[layout.source_fk];
          const Value& tgt = row[layout.target_fk];
          bool broken = !sources.count(src.to_string()) || !targets.count(tgt.to_string());
          if (broken)
            out.push_back({ViolationKind::dangling_link, relation.name, row[layout.pk],
                           handle->location()});
          std::string pair = src.to_string() + "\x1f" + tgt.to_string();
          if (!seen_pairs.insert(pair).second)
            out.push_back({ViolationKind::duplicate_link, relation.name, row[layout.pk],
                           handle->location()});
        }
      }
    }
  }
  return out;
}

StoreMetrics Runtime::metrics(const LocationId& location) const {
  std::lock_guard lock(metrics_mu_);
  auto it = metrics_.find(location);
  if (it == metrics_.end()) throw Error(Errc::unknown_location, "no metrics for '" + location + "'");
  return it->second;
}

std::map<LocationId, StoreMetrics> Runtime::metrics_snapshot() const {
  std::lock_guard lock(metrics_mu_);
  return metrics_;
}

void Runtime::set_metrics(const LocationId& location, const StoreMetrics& metrics) {
  validate_metrics(metrics);
  std::lock_guard lock(metrics_mu_);
  auto it = metrics_.find(location);
  if (it == metrics_.end()) throw Error(Errc::unknown_location, "no metrics for '" + location + "'");
  it->second = metrics;
}

void Runtime::patch_metrics(const LocationId& location, const MetricsPatch& patch) {
  std::lock_guard lock(metrics_mu_);
  auto it = metrics_.find(location);
  if (it == metrics_.end()) throw Error(Errc::unknown_location, "no metrics for '" + location + "'");
  it->second = update_metrics(it->second, patch);
}

void Runtime::observe_latency(const LocationId& location, double seconds) {
  std::lock_guard lock(metrics_mu_);
  auto it = metrics_.find(location);
  if (it == metrics_.end()) throw Error(Errc::unknown_location, "no metrics for '" + location + "'");
  it->second = record_observation(it->second, seconds, weights_);
}

void Runtime::set_injected_delay(const LocationId& location, std::optional<double> seconds) {
  store(location).set_injected_delay(seconds);
}

StoreTelemetry Runtime::telemetry(const LocationId& location) const {
  std::lock_guard lock(metrics_mu_);
  auto it = telemetry_.find(location);
  if (it == telemetry_.end())
    throw Error(Errc::unknown_location, "no telemetry for '" + location + "'");
  return it->second;
}

}  // namespace mstore
