#include "mars/bandit.hpp"

#include <cmath>

namespace mars {

PolicyId select_policy(const WorkloadFeatures& features, const BanditState& state) {
  (void)features;  // logged by callers; UCB1 here is context-free
  for (int arm = 0; arm < kNumPolicies; ++arm)
    if (state.pulls[static_cast<size_t>(arm)] == 0)
      return static_cast<PolicyId>(arm);

  int best = 0;
  double best_ucb = -1e300;
  for (int arm = 0; arm < kNumPolicies; ++arm) {
    double bonus = std::sqrt(2.0 * std::log(static_cast<double>(state.total_pulls)) /
                             static_cast<double>(state.pulls[static_cast<size_t>(arm)]));
    double ucb = state.mean_reward[static_cast<size_t>(arm)] + bonus;
    if (ucb > best_ucb) {
      best_ucb = ucb;
      best = arm;
    }
  }
  return static_cast<PolicyId>(best);
}

void update_bandit(BanditState& state, PolicyId arm, double reward) {
  size_t a = static_cast<size_t>(arm);
  state.pulls[a] += 1;
  state.total_pulls += 1;
  state.mean_reward[a] +=
      (reward - state.mean_reward[a]) / static_cast<double>(state.pulls[a]);
}

}  // namespace mars
