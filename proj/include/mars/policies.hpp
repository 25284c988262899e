#pragma once
// The six forgetting policies as budget-restoring transformations over a
// store. Every policy evicts only current eviction candidates, so closure
// and task-safety hold by construction; every action lands in the audit log.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mars/dp.hpp"
#include "mars/reflection.hpp"
#include "mars/scoring.hpp"
#include "mars/sensitivity.hpp"
#include "mars/store.hpp"

namespace mars {

enum class PolicyId { Fifo, Lru, PriorityDecay, ReflectionSummary, RandomDrop, Hybrid };
inline constexpr int kNumPolicies = 6;

const char* policy_name(PolicyId p);
std::optional<PolicyId> policy_from_name(const std::string& name);

// Instrumentation emitted with every outcome.
//   nodes_touched: evictions plus parent-exposure checks in the loop;
//   pq_ops: ordered-queue pops and pushes in the eviction loop;
//   similarity_calls: embedding similarity evaluations during the trigger.
struct OpCounters {
  int64_t nodes_touched = 0;
  int64_t pq_ops = 0;
  int64_t similarity_calls = 0;
};

struct SummaryRecord {
  std::vector<NodeId> cluster;
  NodeId summary_id;
  double distortion = 0.0;
};

struct PolicyOutcome {
  PolicyId policy = PolicyId::Fifo;
  std::vector<std::pair<NodeId, std::string>> evicted;  // (id, rationale)
  std::vector<SummaryRecord> summarized;
  Weight freed_weight = 0;  // removed weight minus created summary weight
  std::vector<std::string> phases_executed;
  OpCounters op_counters;
  bool needs_followup = false;      // reflection alone did not restore budget
  bool dp_tiebreak_used = false;
  bool dp_fallback_argmax = false;  // accountant exhausted mid-pass
};

std::string outcome_to_json(const PolicyOutcome& outcome);

struct PolicyContext {
  ReflectionConfig reflection;
  SensitivityRuleSet rules;
  DpConfig dp;
  Embedding goal{};               // ranking context for density phases
  double hysteresis_margin_frac = 0.05;  // of the median candidate key
  Turn stale_age = 120;           // hybrid phase-1 staleness cut, in turns
  PrivacyAccountant* accountant = nullptr;
  std::string dp_user = "store";
  uint64_t seed = 0;              // drives RandomDrop and DP draws
};

PolicyOutcome apply_fifo(MemoryStore& store, const PolicyContext& ctx);
PolicyOutcome apply_lru(MemoryStore& store, const PolicyContext& ctx);
PolicyOutcome apply_priority_decay(MemoryStore& store, const PolicyContext& ctx);
PolicyOutcome apply_reflection_summary(MemoryStore& store, const PolicyContext& ctx);
PolicyOutcome apply_random_drop(MemoryStore& store, const PolicyContext& ctx);
PolicyOutcome apply_hybrid(MemoryStore& store, const PolicyContext& ctx);

PolicyOutcome apply_policy(MemoryStore& store, PolicyId policy,
                           const PolicyContext& ctx);

}  // namespace mars
