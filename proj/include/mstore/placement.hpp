#pragma once

#include <map>

#include "mstore/schema.hpp"

namespace mstore {

// Live per-store criteria. Bandwidth/load/clients are pushed by the operator
// or the workload config; latency_ewma is learned from measured operations.
struct StoreMetrics {
  double bandwidth = 1.0e6;       // bytes per second, strictly positive
  double server_load = 0.0;       // fraction in [0, 1]
  std::int64_t active_clients = 0;
  double latency_ewma = 0.0;      // seconds, starts at 0
};

struct PolicyWeights {
  double w_load = 0.05;      // seconds added at full load
  double w_clients = 0.001;  // seconds per active client
  double ewma_alpha = 0.2;   // smoothing factor in (0, 1]
};

// Additive cost, every term in seconds:
//   payload / bandwidth + w_load * load + w_clients * clients + latency_ewma
struct ScoreBreakdown {
  double transfer = 0.0;
  double load = 0.0;
  double clients = 0.0;
  double ewma = 0.0;

  double total() const { return transfer + load + clients + ewma; }
};

struct PlacementDecision {
  LocationId chosen;
  std::map<LocationId, ScoreBreakdown> scores;  // every eligible store
  std::vector<LocationId> eligible;             // lexicographic order
  std::vector<LocationId> ineligible;           // rejected by confidentiality
  std::int64_t payload_bytes = 0;
};

void validate_metrics(const StoreMetrics& metrics);   // throws invalid_metrics
void validate_weights(const PolicyWeights& weights);  // throws invalid_metrics

double score(const StoreMetrics& metrics, const PolicyWeights& weights, std::int64_t payload_bytes);
ScoreBreakdown score_breakdown(const StoreMetrics& metrics, const PolicyWeights& weights,
                               std::int64_t payload_bytes);

// Argmin of score over the eligible stores; a private_only entity may only
// land on a private store. Ties break to the lexicographically smallest
// location. Deterministic for identical snapshots.
PlacementDecision choose_location(const SchemaRegistry& registry, const EntityDescriptor& entity,
                                  std::int64_t payload_bytes,
                                  const std::map<LocationId, StoreMetrics>& metrics,
                                  const PolicyWeights& weights);

// latency_ewma <- (1 - alpha) * latency_ewma + alpha * observed; other fields
// pass through unchanged.
StoreMetrics record_observation(StoreMetrics metrics, double observed_latency,
                                const PolicyWeights& weights);

struct MetricsPatch {
  std::optional<double> bandwidth;
  std::optional<double> server_load;
  std::optional<std::int64_t> active_clients;
};

// Applies only the provided fields; latency_ewma is untouched.
StoreMetrics update_metrics(StoreMetrics metrics, const MetricsPatch& patch);

}  // namespace mstore
