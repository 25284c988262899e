#pragma once
// The memory store: a typed, provenance-aware labeled graph with a token
// budget, index views, retrieval endpoints and erasure. Single writer per
// store; policies mutate it only through the primitives below so indices,
// total weight and the audit log never drift apart.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mars/audit.hpp"
#include "mars/embedding.hpp"
#include "mars/errors.hpp"
#include "mars/node.hpp"
#include "mars/scoring.hpp"

namespace mars {

struct RetrievalFilters {
  std::optional<NodeType> node_type;
  std::optional<Turn> created_after;   // inclusive window
  std::optional<Turn> created_before;  // inclusive
  std::optional<double> max_sensitivity;
};

struct ErasureReport {
  std::vector<NodeId> removed;
  std::vector<NodeId> degraded;  // summaries that lost part of their support
  Weight freed_weight = 0;
};

// Minimal record kept after a node dies so provenance chains and erasure
// cascades still resolve through it.
struct Tombstone {
  NodeId id;
  NodeType node_type = NodeType::Episodic;
  std::string content_hash;
  std::string actor;  // attribution retained for receipts until erased
  std::vector<NodeId> parents;
  bool summary = false;
};

// State bundle for lossless restore (used by JSON-LD import).
struct StoreSnapshot {
  Weight budget = 0;
  std::array<Weight, kNumNodeTypes> type_budgets{};
  Turn clock = 0;
  int64_t next_node_seq = 1;
  std::vector<MemoryNode> nodes;  // creation order
  std::vector<MemoryEdge> edges;
  std::vector<Tombstone> tombstones;
  std::vector<std::string> known_users;
};

class MemoryStore {
 public:
  explicit MemoryStore(Weight budget, ScoringConfig scoring = {});

  static MemoryStore restore(const StoreSnapshot& snapshot,
                             ScoringConfig scoring = {});
  StoreSnapshot snapshot() const;

  // --- clock ----------------------------------------------------------
  Turn now() const { return clock_; }
  void advance_clock(Turn to);

  // --- accessors ------------------------------------------------------
  Weight budget() const { return budget_; }
  void set_budget(Weight b);
  const std::array<Weight, kNumNodeTypes>& type_budgets() const {
    return type_budgets_;
  }
  void set_type_budgets(const std::array<Weight, kNumNodeTypes>& shares);
  Weight total_weight() const { return total_weight_; }
  bool over_budget() const { return total_weight_ > budget_; }
  size_t live_count() const { return live_.size(); }

  bool contains(const NodeId& id) const { return live_.count(id) > 0; }
  const MemoryNode& get(const NodeId& id) const;
  const MemoryNode* find(const NodeId& id) const;
  std::vector<NodeId> live_ids() const;  // creation order
  const std::vector<MemoryEdge>& edges() const { return edges_; }
  const std::unordered_map<NodeId, Tombstone>& tombstones() const {
    return tombstones_;
  }
  const ScoringConfig& scoring() const { return scoring_; }

  const AuditLog& log() const { return *log_; }
  AuditLog& log() { return *log_; }
  void set_params_digest(std::string digest) { params_digest_ = std::move(digest); }
  void set_accountant_snapshot(AccountantSnapshot snap) { accountant_ = snap; }
  const AccountantSnapshot& accountant_snapshot() const { return accountant_; }

  void set_purpose_limitation(bool on) { purpose_limitation_ = on; }
  void set_working_set_frac(double f) { working_set_frac_ = f; }
  void register_user(const std::string& user);
  bool knows_user(const std::string& user) const;
  const std::set<std::string>& known_users() const { return known_users_; }

  // --- mutation -------------------------------------------------------
  // Validates the draft, links declared parents with derivesFrom edges and
  // task dependencies with requires edges, updates all indices and emits an
  // insert event. Does not trigger eviction; the caller checks the budget.
  NodeId insert_node(const NodeDraft& draft);

  // Relational edges discovered outside insertion (isA, friendOf, ...).
  void add_edge(const NodeId& src, const NodeId& dst, Relation relation);

  // Marks a task node's goal status; completed tasks stop pinning
  // prerequisites.
  void set_task_status(const NodeId& id, TaskStatus status);

  // Removes targets and every live transitive derivesFrom descendant.
  // Summaries losing part of their support survive flagged as degraded;
  // summaries losing all of it are removed too.
  ErasureReport erase_cascade(const std::vector<NodeId>& targets);

  // --- feasibility ----------------------------------------------------
  bool is_provenance_closed(const std::vector<NodeId>& candidate_set) const;
  // Closure and task-safety of the current live set (cheap sanity probe).
  bool live_set_feasible() const;

  // Live nodes whose removal preserves closure and task-safety, in creation
  // order: dependency-forest leaves that are not pinned prerequisites.
  std::vector<NodeId> eviction_candidates() const;
  bool is_eviction_candidate(const NodeId& id) const;
  // Dependency parent considered by feasibility (first declared), if live.
  std::optional<NodeId> structural_parent(const NodeId& id) const;
  int live_dependents(const NodeId& id) const;

  // --- retrieval ------------------------------------------------------
  // Top-k by density among nearest-neighbour candidates, within the
  // working-set token cap. Bumps access metadata and emits access events.
  std::vector<NodeId> retrieve(const Embedding& query, int k,
                               const RetrievalFilters& filters);

  // Breadth-first ball over semantic+social edges around an anchor entity or
  // node id, reranked by goal similarity.
  std::vector<NodeId> recall(const std::string& anchor, int radius,
                             const Embedding& goal);

  // --- policy primitives ----------------------------------------------
  // Evicts a current eviction candidate and records the event.
  void evict_for_policy(const NodeId& id, const std::string& policy,
                        const std::string& why, std::optional<double> score,
                        std::optional<FeatureVector> features);

  // Replaces a cluster with a summary node typed Semantic: members are
  // tombstoned, derivesFrom edges summary->member persist as provenance.
  // Fails unless every external dependent of a member is absent.
  NodeId apply_summary(const std::vector<NodeId>& member_ids,
                       const NodeDraft& summary_draft,
                       const std::string& policy, const std::string& why);

  void record_policy_trigger(const std::string& policy, Weight before,
                             Weight after, const std::string& note);

  // --- index-layer views ---------------------------------------------
  // Recency order (last_access, created_at, id) ascending == stalest first.
  std::vector<NodeId> by_recency() const;
  // Creation order (creation seq, id) ascending == oldest first.
  std::vector<NodeId> by_creation() const;
  // Entity posting list (canonicalized key).
  std::vector<NodeId> entity_postings(const std::string& entity) const;
  // Exhaustive nearest-neighbour scan (desk scale), filtered.
  std::vector<NodeId> knn(const Embedding& query, int k,
                          const RetrievalFilters& filters) const;

  int max_degree() const;
  int degree(const NodeId& id) const;
  int64_t max_access_count() const;

  // Recomputed Σ w over live nodes; equals total_weight() by invariant.
  Weight recompute_total_weight() const;

  // Similarity-call instrumentation (cosine evaluations in retrieval and
  // feature paths), consumed by the cost model.
  int64_t similarity_calls() const { return similarity_calls_; }
  void add_similarity_calls(int64_t n) const { similarity_calls_ += n; }

  // Churn-guard state for the priority policy: key at which a node survived
  // an eviction-eligible pass. Entries for dead nodes are ignored.
  std::unordered_map<NodeId, double>& hysteresis_marks() {
    return hysteresis_marks_;
  }

 private:
  MemoryStore() = default;

  void index_insert(const MemoryNode& node);
  void index_remove(const MemoryNode& node);
  void remove_node_internal(const NodeId& id, bool keep_summary_edges);
  void touch(MemoryNode& node);
  void rebuild_degree_cache();
  std::unordered_set<NodeId> pinned_prerequisites() const;
  bool covered_by_summary(const NodeId& id) const;
  void emit(AuditOp op, std::vector<NodeId> ids, const std::string& policy,
            const std::string& why, std::optional<double> score,
            std::optional<FeatureVector> features, Weight before,
            const std::string& hash);

  Weight budget_ = 0;
  std::array<Weight, kNumNodeTypes> type_budgets_{};
  ScoringConfig scoring_;
  Turn clock_ = 0;
  int64_t next_node_seq_ = 1;
  Weight total_weight_ = 0;
  double working_set_frac_ = 0.25;
  bool purpose_limitation_ = false;

  std::unordered_map<NodeId, MemoryNode> live_;
  std::vector<NodeId> creation_order_;  // may contain dead ids, filtered lazily
  std::vector<MemoryEdge> edges_;
  std::unordered_map<NodeId, Tombstone> tombstones_;

  // Index views (derived state, rebuilt on restore, never serialized).
  std::set<std::tuple<Turn, int64_t, NodeId>> recency_index_;  // (last, seq, id)
  std::unordered_map<NodeId, int64_t> creation_seq_;
  std::unordered_map<NodeId, std::vector<size_t>> edges_by_node_;
  std::map<std::string, std::set<NodeId>> entity_index_;
  std::unordered_map<NodeId, int> dependent_count_;
  std::unordered_map<NodeId, int> summary_cover_;  // live summaries covering id
  std::unordered_map<NodeId, int> degree_;
  mutable int max_degree_ = 0;
  mutable bool degree_dirty_ = false;
  mutable int64_t max_access_count_ = 0;
  mutable bool max_access_dirty_ = false;
  NodeId last_episodic_;  // temporalNext chain tail

  std::set<std::string> known_users_;
  std::unordered_map<NodeId, double> hysteresis_marks_;
  std::shared_ptr<AuditLog> log_ = std::make_shared<AuditLog>();
  std::string params_digest_ = "0000000000000000";
  AccountantSnapshot accountant_;
  mutable int64_t similarity_calls_ = 0;
};

}  // namespace mars
