#include "mars/reflection.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mars/text.hpp"

namespace mars {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

std::vector<ClusterCandidate> cluster_episodes(const MemoryStore& store,
                                               const ReflectionConfig& config) {
  // Only dependency-forest leaves are replaceable, so only they cluster.
  struct Item {
    NodeId id;
    Turn turn;
    const MemoryNode* node;
  };
  std::vector<Item> items;
  for (const auto& id : store.live_ids()) {
    const MemoryNode& n = store.get(id);
    if (n.node_type != NodeType::Episodic) continue;
    if (store.live_dependents(id) > 0) continue;
    items.push_back({id, n.created_at, &n});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.turn != b.turn) return a.turn < b.turn;
    return a.id < b.id;
  });

  // Single linkage cut at the similarity threshold equals the connected
  // components of the pairwise graph; the temporal chain constraint bounds
  // every edge to the gap limit, so only a sliding window of pairs matters.
  int n = static_cast<int>(items.size());
  DisjointSet dsu(n);
  int64_t sims = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (items[static_cast<size_t>(j)].turn - items[static_cast<size_t>(i)].turn >
          config.temporal_gap_limit)
        break;
      ++sims;
      if (cosine(items[static_cast<size_t>(i)].node->content_embedding,
                 items[static_cast<size_t>(j)].node->content_embedding) >=
          config.cluster_similarity_threshold)
        dsu.unite(i, j);
    }
  }
  store.add_similarity_calls(sims);

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) groups[dsu.find(i)].push_back(i);

  std::vector<ClusterCandidate> out;
  for (auto& [root, members] : groups) {
    if (members.size() < 2) continue;
    ClusterCandidate c;
    std::vector<Embedding> embs;
    for (int idx : members) {
      const Item& it = items[static_cast<size_t>(idx)];
      c.member_ids.push_back(it.id);
      c.total_weight += it.node->weight;
      c.max_member_sensitivity =
          std::max(c.max_member_sensitivity, it.node->sensitivity);
      embs.push_back(it.node->content_embedding);
    }
    c.centroid = mean_embedding(embs.data(), static_cast<int>(embs.size()));
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const ClusterCandidate& a, const ClusterCandidate& b) {
              if (a.total_weight != b.total_weight)
                return a.total_weight > b.total_weight;
              return a.member_ids.front() < b.member_ids.front();
            });
  return out;
}

SummaryDraft summarize_cluster(const ClusterCandidate& cluster,
                               const MemoryStore& store,
                               const SensitivityRuleSet& rules) {
  std::set<std::string> keywords;
  for (const auto& id : cluster.member_ids) {
    const MemoryNode& n = store.get(id);
    // Excise surface-sensitive spans before keyword extraction.
    std::string text = n.content;
    for (const auto& p : rules.surface_patterns)
      text = std::regex_replace(text, p.re, " ");
    for (auto& tok : tokenize(text)) keywords.insert(std::move(tok));
  }
  SummaryDraft draft;
  for (const auto& k : keywords) {
    if (!draft.content.empty()) draft.content += ' ';
    draft.content += k;
  }
  draft.weight = std::max(1, token_count(draft.content));
  draft.sensitivity =
      sensitivity_score(draft.content, NodeType::Semantic, Provenance{}, rules);
  draft.embedding = embed_text(draft.content);
  return draft;
}

double distortion(const ClusterCandidate& cluster, const MemoryStore& store,
                  const Embedding& summary_embedding) {
  if (cluster.member_ids.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& id : cluster.member_ids)
    sum += euclidean(store.get(id).content_embedding, summary_embedding);
  store.add_similarity_calls(static_cast<int64_t>(cluster.member_ids.size()));
  return sum / static_cast<double>(cluster.member_ids.size());
}

ConsolidationResult consolidate(MemoryStore& store,
                                const ClusterCandidate& cluster,
                                const SummaryDraft& draft,
                                const ReflectionConfig& config,
                                const std::string& policy_label) {
  for (const auto& id : cluster.member_ids)
    if (!store.contains(id))
      throw Error(ErrorCode::MemberNotLive, "member not live: " + id);

  ConsolidationResult res;
  res.distortion = distortion(cluster, store, draft.embedding);
  res.utility_bound = config.kappa * res.distortion;

  if (res.distortion > config.tau_util) {
    res.skipped_gate = "distortion";
    return res;
  }
  double min_sensitivity = 1.0;
  for (const auto& id : cluster.member_ids)
    min_sensitivity = std::min(min_sensitivity, store.get(id).sensitivity);
  if (draft.sensitivity > min_sensitivity - config.tau_priv) {
    res.skipped_gate = "privacy";
    return res;
  }
  if (draft.weight >= cluster.total_weight) {
    res.skipped_gate = "weight";
    return res;
  }

  NodeDraft node_draft;
  node_draft.content = draft.content;
  node_draft.node_type = NodeType::Semantic;
  node_draft.sensitivity = draft.sensitivity;
  node_draft.weight = draft.weight;
  node_draft.type_payload = SemanticPayload{"summary", {}, 1.0, 1.0};

  std::string why = rationale(
      "summarized", {{"redundant episodic cluster", 1.0},
                     {"distortion within bound", config.tau_util - res.distortion}});
  res.summary_id =
      store.apply_summary(cluster.member_ids, node_draft, policy_label, why);
  res.applied = true;
  res.freed_weight = cluster.total_weight - draft.weight;
  return res;
}

}  // namespace mars
