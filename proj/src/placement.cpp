#include "mstore/placement.hpp"

#include <cmath>

namespace mstore {

void validate_metrics(const StoreMetrics& metrics) {
  if (!std::isfinite(metrics.bandwidth) || metrics.bandwidth <= 0)
    throw Error(Errc::invalid_metrics, "bandwidth must be finite and > 0");
  if (!std::isfinite(metrics.server_load) || metrics.server_load < 0 || metrics.server_load > 1)
    throw Error(Errc::invalid_metrics, "server_load must be within [0, 1]");
  if (metrics.active_clients < 0)
    throw Error(Errc::invalid_metrics, "active_clients must be non-negative");
  if (!std::isfinite(metrics.latency_ewma) || metrics.latency_ewma < 0)
    throw Error(Errc::invalid_metrics, "latency_ewma must be finite and >= 0");
}

void validate_weights(const PolicyWeights& weights) {
  if (!std::isfinite(weights.w_load) || weights.w_load < 0)
    throw Error(Errc::invalid_metrics, "w_load must be finite and >= 0");
  if (!std::isfinite(weights.w_clients) || weights.w_clients < 0)
    throw Error(Errc::invalid_metrics, "w_clients must be finite and >= 0");
  if (!std::isfinite(weights.ewma_alpha) || weights.ewma_alpha <= 0 || weights.ewma_alpha > 1)
    throw Error(Errc::invalid_metrics, "ewma_alpha must be within (0, 1]");
}

ScoreBreakdown score_breakdown(const StoreMetrics& metrics, const PolicyWeights& weights,
                               std::int64_t payload_bytes) {
  validate_metrics(metrics);
  validate_weights(weights);
  if (payload_bytes < 0) throw Error(Errc::invalid_metrics, "payload must be non-negative");
  ScoreBreakdown b;
  b.transfer = static_cast<double>(payload_bytes) / metrics.bandwidth;
  b.load = weights.w_load * metrics.server_load;
  b.clients = weights.w_clients * static_cast<double>(metrics.active_clients);
  b.ewma = metrics.latency_ewma;
  return b;
}

double score(const StoreMetrics& metrics, const PolicyWeights& weights, std::int64_t payload_bytes) {
  return score_breakdown(metrics, weights, payload_bytes).total();
}

PlacementDecision choose_location(const SchemaRegistry& registry, const EntityDescriptor& entity,
                                  std::int64_t payload_bytes,
                                  const std::map<LocationId, StoreMetrics>& metrics,
                                  const PolicyWeights& weights) {
  PlacementDecision decision;
  decision.payload_bytes = payload_bytes;
  for (const auto& [location, store_metrics] : metrics) {
    const auto& store = registry.store(location);
    if (entity.confidentiality == Confidentiality::private_only &&
        store.privacy != StorePrivacy::private_cloud) {
      decision.ineligible.push_back(location);
      continue;
    }
    decision.eligible.push_back(location);
    decision.scores.emplace(location, score_breakdown(store_metrics, weights, payload_bytes));
  }
  if (decision.eligible.empty())
    throw Error(Errc::no_eligible_store,
                "no store may hold entity '" + entity.name + "'");
  // metrics is ordered by location, so a strict < keeps the lexicographically
  // smallest location on ties
  const LocationId* best = nullptr;
  double best_cost = 0;
  for (const auto& location : decision.eligible) {
    double cost = decision.scores.at(location).total();
    if (!best || cost < best_cost) {
      best = &location;
      best_cost = cost;
    }
  }
  decision.chosen = *best;
  return decision;
}

StoreMetrics record_observation(StoreMetrics metrics, double observed_latency,
                                const PolicyWeights& weights) {
  validate_weights(weights);
  if (!std::isfinite(observed_latency) || observed_latency < 0)
    throw Error(Errc::invalid_observation, "observed latency must be finite and >= 0");
  metrics.latency_ewma =
      (1.0 - weights.ewma_alpha) * metrics.latency_ewma + weights.ewma_alpha * observed_latency;
  return metrics;
}

StoreMetrics update_metrics(StoreMetrics metrics, const MetricsPatch& patch) {
  if (patch.bandwidth) metrics.bandwidth = *patch.bandwidth;
  if (patch.server_load) metrics.server_load = *patch.server_load;
  if (patch.active_clients) metrics.active_clients = *patch.active_clients;
  validate_metrics(metrics);
  return metrics;
}

}  // namespace mstore
