#pragma once
// Episodic consolidation: single-linkage clustering with a temporal chain
// constraint, a deterministic extractive summarizer, distortion measurement,
// and the dual-gated replacement step (distortion gate + privacy gate).

#include <optional>
#include <string>
#include <vector>

#include "mars/embedding.hpp"
#include "mars/sensitivity.hpp"
#include "mars/store.hpp"

namespace mars {

struct ReflectionConfig {
  double tau_util = 0.35;   // max allowed distortion (embedding units)
  double tau_priv = 0.05;   // required sensitivity reduction margin
  double kappa = 1.0;       // assumed Lipschitz constant of U in the mean embedding
  int max_summaries_per_trigger = 3;
  double cluster_similarity_threshold = 0.60;
  Turn temporal_gap_limit = 8;  // max gap between consecutive member turns
};

struct ClusterCandidate {
  std::vector<NodeId> member_ids;  // creation order
  Embedding centroid{};
  Weight total_weight = 0;
  double max_member_sensitivity = 0.0;
};

struct SummaryDraft {
  std::string content;
  Weight weight = 0;
  double sensitivity = 0.0;
  Embedding embedding{};
};

struct ConsolidationResult {
  bool applied = false;
  std::string skipped_gate;  // "distortion" | "privacy" | "weight" when skipped
  NodeId summary_id;
  double distortion = 0.0;
  double utility_bound = 0.0;  // kappa * distortion, recorded for audit
  Weight freed_weight = 0;
};

// Agglomerates episodic leaves: merge the most-similar pair while the
// single-linkage cosine stays >= threshold and consecutive member turns stay
// within the gap limit. Returns clusters of size >= 2, heaviest first.
std::vector<ClusterCandidate> cluster_episodes(const MemoryStore& store,
                                               const ReflectionConfig& config);

// Union of member keyword sets minus surface-sensitive spans, rendered in
// sorted order; weight and sensitivity recomputed from the rendered text.
SummaryDraft summarize_cluster(const ClusterCandidate& cluster,
                               const MemoryStore& store,
                               const SensitivityRuleSet& rules);

// Mean Euclidean distance from member embeddings to the summary embedding.
double distortion(const ClusterCandidate& cluster, const MemoryStore& store,
                  const Embedding& summary_embedding);

// Applies the replacement when both gates pass and the summary is strictly
// lighter than the cluster; otherwise reports the gate that failed.
ConsolidationResult consolidate(MemoryStore& store,
                                const ClusterCandidate& cluster,
                                const SummaryDraft& draft,
                                const ReflectionConfig& config,
                                const std::string& policy_label);

}  // namespace mars
