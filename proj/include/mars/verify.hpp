#pragma once
// Executable verification of the retention guarantees against brute-force
// oracles: approximation ratios, LRU optimality, weight-Lipschitz bounds,
// budget monotonicity, DP ratio audits, mechanism distribution checks,
// policy feasibility fuzzing and complexity-counter assertions.

#include <cstdint>
#include <string>
#include <vector>

#include "mars/optimizer.hpp"
#include "mars/rng.hpp"
#include "mars/store.hpp"

namespace mars {

struct CheckResult {
  std::string name;
  bool pass = false;
  bool expected_fail = false;  // negative controls pass by failing
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::string to_json() const;
};

struct VerifyOptions {
  int greedy_instances = 500;
  int lru_instances = 100;
  int fuzz_triggers = 10000;
  int monotonicity_instances = 200;
  int adversarial_instances = 1000;
  int distortion_clusters = 200;
  int mechanism_draws = 100000;
  uint64_t seed = 42;
  bool negative_controls = false;
};

VerificationReport run_verification(const VerifyOptions& options);

// Shared generators (also used by the acceptance suite and tests).
RetentionInstance random_coverage_instance(Rng& rng, int max_items, int max_depth);
RetentionInstance random_modular_instance(Rng& rng, int max_items, int max_depth);

// Random store with dependency forests, tasks and access history, built to
// sit over budget so one policy trigger fires. The returned value map prices
// every node for the modular drop audit.
struct FuzzStore {
  MemoryStore store;
  std::map<std::string, double> values;  // id -> modular value
  double lipschitz = 0.0;                // max value/weight at build time
};
FuzzStore random_fuzz_store(Rng& rng, bool adversarial);

}  // namespace mars
