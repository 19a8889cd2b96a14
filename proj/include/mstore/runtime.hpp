#pragma once

#include <shared_mutex>

#include "mstore/placement.hpp"
#include "mstore/store.hpp"

namespace mstore {

// One entity instance. Every record returned by a read operation carries the
// location of the store it came from.
struct Record {
  std::string entity;
  std::map<std::string, Value> values;
  std::optional<LocationId> location;

  const Value& value(std::string_view field) const;  // throws unknown_field
  bool operator==(const Record&) const = default;
};

// A parent with the rows a relation associates to it. one_to_many fills
// children; many_to_many fills link_pairs as (link row, target row).
struct ViewRow {
  Record parent;
  RelationKind kind = RelationKind::one_to_many;
  std::vector<Record> children;
  std::vector<std::pair<Record, Record>> link_pairs;
};

enum class ViolationKind { dangling_fk, dangling_link, duplicate_link };

const char* violation_kind_name(ViolationKind kind);

struct IntegrityViolation {
  ViolationKind kind = ViolationKind::dangling_fk;
  std::string relation;
  Value offending_key;  // primary key of the row exhibiting the violation
  LocationId store;
};

struct StoreTelemetry {
  std::uint64_t op_count = 0;
  double latency_sum = 0.0;

  double mean_latency() const { return op_count == 0 ? 0.0 : latency_sum / double(op_count); }
};

struct InsertOutcome {
  Value pk;
  LocationId location;
  std::optional<PlacementDecision> decision;  // present when the policy chose
};

// Location-aware CRUD over every embedded store of a frozen registry. Reads
// fan out to all stores and merge globally; writes go to one store, either
// the record's explicit location or the placement policy's choice. Mutations
// are serialized; reads may run concurrently between them. Every executed
// statement feeds its observed latency into the per-store EWMA.
class Runtime {
 public:
  explicit Runtime(SchemaRegistry registry, PolicyWeights weights = {});

  const SchemaRegistry& registry() const { return registry_; }
  const PolicyWeights& weights() const { return weights_; }
  std::vector<LocationId> open_locations() const;
  StoreHandle& store(const LocationId& location);  // throws unknown_location

  // Fans out to every store, merges in store-registration order, then
  // re-applies sort/offset/limit globally. location is set on every record.
  std::vector<Record> select(std::string_view entity, const QueryOptions& options = {});

  Value insert(Record record);
  InsertOutcome insert_with_decision(Record record);

  // Writes only to record.location (as returned by select), keyed by primary
  // key. Returns 0 when the row has since disappeared.
  std::int64_t update(const Record& record);

  // Enforces on_delete for every relation touching the entity: restrict
  // refuses while children or links exist anywhere, cascade removes them
  // first (children, then links, then the parent).
  std::int64_t remove(std::string_view entity, const Value& pk, const LocationId& location);

  std::vector<ViewRow> select_view(std::string_view relation,
                                   const QueryOptions& parent_options = {});

  void link(std::string_view relation, const Value& source_pk, const Value& target_pk,
            const LocationId& location);
  std::int64_t unlink(std::string_view relation, const Value& source_pk, const Value& target_pk);

  // Scans every store: foreign keys without a parent anywhere, link rows with
  // a missing endpoint, duplicated link pairs. Empty result == consistent.
  std::vector<IntegrityViolation> check_integrity();

  // placement state
  StoreMetrics metrics(const LocationId& location) const;
  std::map<LocationId, StoreMetrics> metrics_snapshot() const;
  void set_metrics(const LocationId& location, const StoreMetrics& metrics);
  void patch_metrics(const LocationId& location, const MetricsPatch& patch);
  void observe_latency(const LocationId& location, double seconds);
  void set_injected_delay(const LocationId& location, std::optional<double> seconds);
  StoreTelemetry telemetry(const LocationId& location) const;

 private:
  struct FoundRow {
    StoreHandle* store = nullptr;
    Record record;
  };

  ExecResult exec_measured(StoreHandle& handle, const Statement& statement);
  std::vector<Record> fan_out_select(std::string_view entity, const QueryOptions& options);
  Record row_to_record(const EntityDescriptor& entity, const Row& row, const LocationId& location) const;
  std::optional<FoundRow> find_by_pk(const EntityDescriptor& entity, const Value& pk);
  void check_references(const EntityDescriptor& entity, const std::map<std::string, Value>& values,
                        const Value& self_pk, bool is_update);
  std::vector<Record> children_of(const RelationDescriptor& relation, const Value& parent_pk);
  std::vector<Record> link_rows_touching(const RelationDescriptor& relation, bool source_side,
                                         const Value& pk);
  std::int64_t remove_locked(const EntityDescriptor& entity, const Value& pk,
                             const LocationId& location, std::vector<std::string>& visited,
                             std::vector<CompletedDeletion>& completed);
  Value next_link_pk(const EntityDescriptor& link_entity);
  void ensure_placeable(const EntityDescriptor& entity, const StoreDescriptor& store) const;

  SchemaRegistry registry_;
  PolicyWeights weights_;
  std::vector<std::unique_ptr<StoreHandle>> stores_;  // registration order
  std::map<LocationId, StoreMetrics> metrics_;
  std::map<LocationId, StoreTelemetry> telemetry_;
  mutable std::shared_mutex op_mu_;       // writers exclusive, readers shared
  mutable std::mutex metrics_mu_;
};

}  // namespace mstore
