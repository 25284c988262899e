#pragma once
// Offline and streaming retention optimization over small instances, with
// exhaustive oracles. Instances are dependency forests; feasible sets are
// provenance-closed and within budget.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mars/node.hpp"
#include "mars/utility.hpp"

namespace mars {

struct RetentionItem {
  std::string id;
  Weight weight = 1;
  double value = 0.0;   // Modular / RecencyDecay
  double age = 0.0;     // RecencyDecay
  std::vector<int> topics;  // CoverageSubmodular
  double sensitivity = 0.0;
  std::optional<std::string> parent;  // dependency forest
};

struct RetentionInstance {
  std::vector<RetentionItem> items;
  Weight budget = 0;
  UtilityKind utility_kind = UtilityKind::Modular;
  double decay_lambda = 0.1;
  std::map<int, double> topic_values;

  UtilityModel build_model() const;
  // max over items of U({i}) / w_i: the weight-Lipschitz constant.
  double lipschitz_constant() const;
};

std::string instance_to_json(const RetentionInstance& instance);
RetentionInstance instance_from_json(const std::string& text);

struct Optimum {
  std::vector<std::string> ids;  // sorted
  double value = 0.0;
};

// Exhaustive search over provenance-closed, budget-feasible subsets.
// Ties resolve to the lexicographically smallest id set. Throws TooLarge
// beyond 20 items.
Optimum brute_force_optimum(const RetentionInstance& instance);

// Greedy by marginal gain per unit weight over feasible augmentations (an
// item becomes addable once its ancestors are in). Ties: smaller weight,
// then id.
std::vector<std::string> greedy_density(const RetentionInstance& instance);

// Better of greedy and the best feasible single-item closure; >= 1/2 of the
// optimum for monotone submodular utilities.
std::vector<std::string> best_of_greedy_and_singleton(
    const RetentionInstance& instance);

struct StreamStep {
  std::vector<std::string> retained;  // sorted, after the step
  double utility = 0.0;
  double regret = 0.0;
  bool exact = false;  // offline optimum was exhaustive (prefix <= cap)
  bool accepted = false;
};

struct StreamTrace {
  std::vector<StreamStep> steps;
  int evictions = 0;
  double mean_regret = 0.0;
};

// Heap-flavoured online greedy: admit the arrival after evicting the
// lowest-density removable members, unless rejecting it scores higher.
// Per-step regret is exact up to prefix_cap, approximate after.
StreamTrace online_greedy_with_eviction(const std::vector<RetentionItem>& arrivals,
                                        Weight budget, UtilityKind kind,
                                        double decay_lambda,
                                        const std::map<int, double>& topic_values,
                                        int prefix_cap = 16);

struct MonotonicityReport {
  int instances = 0;
  int budgets = 0;
  int monotonicity_violations = 0;
  int lipschitz_violations = 0;
  double max_lipschitz_excess = 0.0;  // max of |dU| - L*dB over the ladder
  int greedy_monotonicity_violations = 0;  // informational
};

MonotonicityReport verify_budget_monotonicity(
    const std::vector<RetentionInstance>& instances,
    const std::vector<Weight>& budget_ladder);

}  // namespace mars
