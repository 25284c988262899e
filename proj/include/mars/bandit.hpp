#pragma once
// UCB1 meta-controller over the policy arms. Reward is the composite score
// of the last completed window; workload features ride along for logging
// but do not condition the choice.

#include <array>
#include <cstdint>

#include "mars/policies.hpp"

namespace mars {

struct WorkloadFeatures {
  double arrival_rate = 0.0;
  double average_age = 0.0;
  double retrieval_hit_rate = 0.0;
  double social_fraction = 0.0;
  double task_fraction = 0.0;
};

struct BanditState {
  std::array<int64_t, kNumPolicies> pulls{};
  std::array<double, kNumPolicies> mean_reward{};
  int64_t total_pulls = 0;
};

// Unexplored arms first in PolicyId order, then argmax of
// mean + sqrt(2 ln(total) / pulls).
PolicyId select_policy(const WorkloadFeatures& features, const BanditState& state);

void update_bandit(BanditState& state, PolicyId arm, double reward);

}  // namespace mars
