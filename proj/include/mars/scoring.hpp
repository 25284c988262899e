#pragma once
// Feature extraction and the unified retention scores. All scores reduce to
// a per-token density (utility proxy minus sensitivity penalty over weight)
// so heterogeneous node types compete on one axis.

#include <array>
#include <cstdint>

#include "mars/embedding.hpp"
#include "mars/node.hpp"

namespace mars {

class MemoryStore;

struct FeatureVector {
  double recency = 0.0;          // exp(-lambda_age * turns since last access)
  double frequency = 0.0;        // access_count / (1 + max access_count)
  double goal_similarity = 0.0;  // cosine vs current goal embedding
  double centrality = 0.0;       // degree / max degree over semantic+social edges
  double novelty = 0.0;          // 1 - max cosine vs retained same-type peers
  double urgency = 0.0;          // task nodes with a deadline only

  std::array<double, 6> as_array() const {
    return {recency, frequency, goal_similarity, centrality, novelty, urgency};
  }
};

inline constexpr int kNumFeatures = 6;
inline constexpr int kNumNodeTypes = 4;

using TypeWeights = std::array<double, kNumFeatures>;

struct ScoringConfig {
  // Per-type weight vectors over (recency, frequency, goal_similarity,
  // centrality, novelty, urgency).
  std::array<TypeWeights, kNumNodeTypes> type_weights = {{
      {0.35, 0.10, 0.10, 0.05, 0.30, 0.00},  // Episodic: recency/novelty
      {0.10, 0.10, 0.10, 0.35, 0.35, 0.00},  // Semantic: centrality/novelty
      {0.10, 0.35, 0.10, 0.35, 0.10, 0.00},  // Social: frequency/centrality
      {0.05, 0.05, 0.35, 0.05, 0.10, 0.40},  // Task: urgency/goal similarity
  }};
  double lambda_priv = 0.3;
  double lambda_age = 0.05;
  double imp_alpha = 0.5;
  double imp_beta = 0.3;
  double imp_gamma = 0.2;
  // Type prior used by the importance scalar.
  std::array<double, kNumNodeTypes> type_weight_table = {0.4, 0.7, 0.6, 0.9};
  double urgency_horizon = 50.0;  // turns over which deadline pressure ramps
  double rebalance_eta = 0.25;
  double share_floor_frac = 0.10;

  const TypeWeights& weights_for(NodeType t) const {
    return type_weights[static_cast<size_t>(t)];
  }
  double type_weight(NodeType t) const {
    return type_weight_table[static_cast<size_t>(t)];
  }
};

// Deterministic given store state; `goal` may be a zero vector.
FeatureVector compute_features(const MemoryStore& store, const MemoryNode& node,
                               const Embedding& goal,
                               const ScoringConfig& config);

double utility_proxy(NodeType type, const FeatureVector& features,
                     const ScoringConfig& config);

// (utility proxy - lambda_priv * sensitivity) / weight; may be negative.
double density(const MemoryNode& node, const FeatureVector& features,
               const ScoringConfig& config);
double density_from_proxy(double proxy, double sensitivity, Weight weight,
                          const ScoringConfig& config);

// imp(n) = alpha * type_weight + beta * recency + gamma * frequency,
// clamped to [0,1].
double importance(const MemoryStore& store, const MemoryNode& node,
                  const ScoringConfig& config, Turn now);

// removal_priority(n) = s * age_norm * (1 - imp); higher evicts sooner.
double removal_priority(double sensitivity, double age_norm, double imp);
// age_norm normalizes staleness by the oldest live node.
double removal_priority(const MemoryStore& store, const MemoryNode& node,
                        const ScoringConfig& config, Turn now);

// Multiplicative-weights update of the four soft type shares. Shares are
// integers summing exactly to the budget (largest-remainder rounding) and
// each is floored at share_floor_frac of the budget.
std::array<Weight, kNumNodeTypes> rebalance_type_budgets(
    const std::array<Weight, kNumNodeTypes>& shares,
    const std::array<double, kNumNodeTypes>& marginal_gains, Weight budget,
    const ScoringConfig& config);

}  // namespace mars
