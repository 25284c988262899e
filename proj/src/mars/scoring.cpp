#include "mars/scoring.hpp"

#include <algorithm>
#include <cmath>

#include "mars/store.hpp"

namespace mars {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

double recency_of(const MemoryNode& node, Turn now, double lambda_age) {
  double age = static_cast<double>(std::max<Turn>(0, now - node.last_access));
  return std::exp(-lambda_age * age);
}

double frequency_of(const MemoryStore& store, const MemoryNode& node) {
  return static_cast<double>(node.access_count) /
         (1.0 + static_cast<double>(store.max_access_count()));
}

}  // namespace

FeatureVector compute_features(const MemoryStore& store, const MemoryNode& node,
                               const Embedding& goal,
                               const ScoringConfig& config) {
  FeatureVector f;
  f.recency = recency_of(node, store.now(), config.lambda_age);
  f.frequency = frequency_of(store, node);
  f.goal_similarity = cosine(node.content_embedding, goal);
  store.add_similarity_calls(1);

  int maxd = store.max_degree();
  f.centrality = maxd > 0 ? static_cast<double>(store.degree(node.id)) / maxd : 0.0;

  // Novelty against retained peers of the same type.
  double max_sim = -1.0;
  int peers = 0;
  for (const auto& id : store.live_ids()) {
    if (id == node.id) continue;
    const MemoryNode& peer = store.get(id);
    if (peer.node_type != node.node_type) continue;
    max_sim = std::max(max_sim, cosine(node.content_embedding,
                                       peer.content_embedding));
    ++peers;
  }
  store.add_similarity_calls(peers);
  f.novelty = peers == 0 ? 1.0 : clamp01(1.0 - max_sim);

  if (const TaskPayload* task = node.task(); task && task->deadline) {
    double remaining = static_cast<double>(*task->deadline - store.now());
    f.urgency = remaining <= 0.0
                    ? 1.0
                    : clamp01(1.0 - remaining / config.urgency_horizon);
  }
  return f;
}

double utility_proxy(NodeType type, const FeatureVector& features,
                     const ScoringConfig& config) {
  const TypeWeights& w = config.weights_for(type);
  const auto psi = features.as_array();
  double u = 0.0;
  for (int i = 0; i < kNumFeatures; ++i)
    u += w[static_cast<size_t>(i)] * psi[static_cast<size_t>(i)];
  return u;
}

double density_from_proxy(double proxy, double sensitivity, Weight weight,
                          const ScoringConfig& config) {
  return (proxy - config.lambda_priv * sensitivity) / static_cast<double>(weight);
}

double density(const MemoryNode& node, const FeatureVector& features,
               const ScoringConfig& config) {
  double proxy = utility_proxy(node.node_type, features, config);
  return density_from_proxy(proxy, node.sensitivity, node.weight, config);
}

double importance(const MemoryStore& store, const MemoryNode& node,
                  const ScoringConfig& config, Turn now) {
  double rec = std::exp(-config.lambda_age *
                        static_cast<double>(std::max<Turn>(0, now - node.last_access)));
  double freq = frequency_of(store, node);
  double imp = config.imp_alpha * config.type_weight(node.node_type) +
               config.imp_beta * rec + config.imp_gamma * freq;
  return clamp01(imp);
}

double removal_priority(double sensitivity, double age_norm, double imp) {
  return sensitivity * age_norm * (1.0 - imp);
}

double removal_priority(const MemoryStore& store, const MemoryNode& node,
                        const ScoringConfig& config, Turn now) {
  Turn max_age = 0;
  for (const auto& id : store.live_ids())
    max_age = std::max(max_age, now - store.get(id).last_access);
  double age = static_cast<double>(std::max<Turn>(0, now - node.last_access));
  double age_norm = max_age > 0 ? age / static_cast<double>(max_age) : 0.0;
  double imp = importance(store, node, config, now);
  return removal_priority(node.sensitivity, age_norm, imp);
}

std::array<Weight, kNumNodeTypes> rebalance_type_budgets(
    const std::array<Weight, kNumNodeTypes>& shares,
    const std::array<double, kNumNodeTypes>& marginal_gains, Weight budget,
    const ScoringConfig& config) {
  std::array<double, kNumNodeTypes> raw{};
  double sum = 0.0;
  for (int t = 0; t < kNumNodeTypes; ++t) {
    raw[static_cast<size_t>(t)] = static_cast<double>(shares[static_cast<size_t>(t)]) *
                                  std::exp(config.rebalance_eta *
                                           marginal_gains[static_cast<size_t>(t)]);
    sum += raw[static_cast<size_t>(t)];
  }
  std::array<double, kNumNodeTypes> frac{};
  for (int t = 0; t < kNumNodeTypes; ++t)
    frac[static_cast<size_t>(t)] = sum > 0.0 ? raw[static_cast<size_t>(t)] / sum
                                             : 1.0 / kNumNodeTypes;

  // Enforce the per-type floor, redistributing the excess proportionally
  // among unfloored types until stable.
  double floor = config.share_floor_frac;
  std::array<bool, kNumNodeTypes> pinned{};
  for (int iter = 0; iter < kNumNodeTypes; ++iter) {
    double pinned_mass = 0.0, free_mass = 0.0;
    for (int t = 0; t < kNumNodeTypes; ++t) {
      if (pinned[static_cast<size_t>(t)]) pinned_mass += floor;
      else free_mass += frac[static_cast<size_t>(t)];
    }
    bool changed = false;
    for (int t = 0; t < kNumNodeTypes; ++t) {
      if (pinned[static_cast<size_t>(t)]) continue;
      double scaled = free_mass > 0.0
                          ? frac[static_cast<size_t>(t)] * (1.0 - pinned_mass) / free_mass
                          : (1.0 - pinned_mass) / kNumNodeTypes;
      if (scaled < floor) {
        pinned[static_cast<size_t>(t)] = true;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double pinned_mass = 0.0, free_mass = 0.0;
  for (int t = 0; t < kNumNodeTypes; ++t) {
    if (pinned[static_cast<size_t>(t)]) pinned_mass += floor;
    else free_mass += frac[static_cast<size_t>(t)];
  }
  std::array<double, kNumNodeTypes> target{};
  for (int t = 0; t < kNumNodeTypes; ++t) {
    target[static_cast<size_t>(t)] =
        pinned[static_cast<size_t>(t)]
            ? floor * static_cast<double>(budget)
            : (free_mass > 0.0
                   ? frac[static_cast<size_t>(t)] * (1.0 - pinned_mass) / free_mass
                   : (1.0 - pinned_mass) / kNumNodeTypes) *
                  static_cast<double>(budget);
  }

  // Largest-remainder rounding keeps the integer sum exactly at the budget.
  std::array<Weight, kNumNodeTypes> out{};
  std::array<double, kNumNodeTypes> rem{};
  Weight used = 0;
  for (int t = 0; t < kNumNodeTypes; ++t) {
    out[static_cast<size_t>(t)] = static_cast<Weight>(std::floor(target[static_cast<size_t>(t)]));
    rem[static_cast<size_t>(t)] = target[static_cast<size_t>(t)] -
                                  static_cast<double>(out[static_cast<size_t>(t)]);
    used += out[static_cast<size_t>(t)];
  }
  std::array<int, kNumNodeTypes> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rem[static_cast<size_t>(a)] > rem[static_cast<size_t>(b)];
  });
  for (int i = 0; used < budget && i < kNumNodeTypes; ++i, ++used)
    out[static_cast<size_t>(order[static_cast<size_t>(i)])] += 1;
  return out;
}

}  // namespace mars
