#pragma once
// One human-editable configuration bundle for the engine, the benchmark and
// the CLI. Every knob has a calibrated default; JSON files override fields
// selectively and CLI flags override files.

#include <string>

#include "mars/dp.hpp"
#include "mars/reflection.hpp"
#include "mars/scoring.hpp"
#include "mars/sensitivity.hpp"

namespace mars {

struct MetricWeights {
  double nc = 0.25;
  double gcr = 0.25;
  double sra = 0.20;
  double pp = 0.15;
  double ce = 0.15;
  double omega_nc = 0.4;   // Perf scalar weights
  double omega_gcr = 0.4;
  double omega_sra = 0.2;
  double cost_per_token = 1.0;
  double cost_per_policy_op = 0.01;
  double cost_per_similarity_call = 0.05;
};

struct EngineConfig {
  ScoringConfig scoring;
  ReflectionConfig reflection;
  DpConfig dp;
  SensitivityRuleSet rules = SensitivityRuleSet::defaults();
  MetricWeights metrics;
  double hysteresis_margin_frac = 0.05;
  Turn stale_age = 120;
  double working_set_frac = 0.25;

  std::string to_json() const;
  static EngineConfig from_json(const std::string& text);
  static EngineConfig from_file(const std::string& path);
  // Digest of the active parameters, stamped on audit events.
  std::string digest() const;
};

}  // namespace mars
