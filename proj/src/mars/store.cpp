#include "mars/store.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <queue>

#include "mars/text.hpp"

namespace mars {

namespace {

constexpr const char* kSummarySource = "reflection-summary";

std::vector<std::string> node_entities(const MemoryNode& n) {
  std::vector<std::string> out;
  if (!n.provenance.actor.empty()) out.push_back(n.provenance.actor);
  switch (n.node_type) {
    case NodeType::Episodic: {
      const auto& p = std::get<EpisodicPayload>(n.type_payload);
      for (const auto& who : p.participants) out.push_back(who);
      break;
    }
    case NodeType::Semantic:
      out.push_back(std::get<SemanticPayload>(n.type_payload).concept_name);
      break;
    case NodeType::Social:
      out.push_back(std::get<SocialPayload>(n.type_payload).entity);
      break;
    case NodeType::Task:
      out.push_back(std::get<TaskPayload>(n.type_payload).goal);
      break;
  }
  return out;
}

bool payload_matches_type(const TypePayload& payload, NodeType type) {
  switch (type) {
    case NodeType::Episodic: return std::holds_alternative<EpisodicPayload>(payload);
    case NodeType::Semantic: return std::holds_alternative<SemanticPayload>(payload);
    case NodeType::Social: return std::holds_alternative<SocialPayload>(payload);
    case NodeType::Task: return std::holds_alternative<TaskPayload>(payload);
  }
  return false;
}

bool is_summary_node(const MemoryNode& n) {
  return n.provenance.source == kSummarySource;
}

}  // namespace

MemoryStore::MemoryStore(Weight budget, ScoringConfig scoring)
    : budget_(budget), scoring_(std::move(scoring)) {
  if (budget_ <= 0)
    throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  Weight quarter = budget_ / kNumNodeTypes;
  type_budgets_ = {quarter, quarter, quarter,
                   budget_ - 3 * quarter};
}

void MemoryStore::advance_clock(Turn to) {
  if (to > clock_) clock_ = to;
}

void MemoryStore::set_budget(Weight b) {
  if (b <= 0) throw Error(ErrorCode::InvalidArgument, "budget must be positive");
  budget_ = b;
}

void MemoryStore::set_type_budgets(const std::array<Weight, kNumNodeTypes>& shares) {
  Weight sum = 0;
  for (Weight s : shares) {
    if (s < 0) throw Error(ErrorCode::InvalidArgument, "negative type share");
    sum += s;
  }
  if (sum != budget_)
    throw Error(ErrorCode::InvalidArgument, "type shares must sum to budget");
  type_budgets_ = shares;
}

const MemoryNode& MemoryStore::get(const NodeId& id) const {
  auto it = live_.find(id);
  if (it == live_.end()) throw Error(ErrorCode::UnknownId, "unknown node: " + id);
  return it->second;
}

const MemoryNode* MemoryStore::find(const NodeId& id) const {
  auto it = live_.find(id);
  return it == live_.end() ? nullptr : &it->second;
}

std::vector<NodeId> MemoryStore::live_ids() const {
  std::vector<NodeId> out;
  out.reserve(live_.size());
  for (const auto& id : creation_order_)
    if (live_.count(id)) out.push_back(id);
  return out;
}

void MemoryStore::register_user(const std::string& user) {
  std::string key = canonical_entity(user);
  if (!key.empty()) known_users_.insert(key);
}

bool MemoryStore::knows_user(const std::string& user) const {
  return known_users_.count(canonical_entity(user)) > 0;
}

NodeId MemoryStore::insert_node(const NodeDraft& draft) {
  if (draft.sensitivity < 0.0 || draft.sensitivity > 1.0)
    throw Error(ErrorCode::InvalidSensitivity, "sensitivity outside [0,1]");
  if (!payload_matches_type(draft.type_payload, draft.node_type))
    throw Error(ErrorCode::InvalidArgument, "payload does not match node type");
  Weight w = draft.weight;
  if (w == 0) w = std::max(1, token_count(draft.content));
  if (w <= 0) throw Error(ErrorCode::NonPositiveWeight, "weight must be >= 1");

  std::vector<NodeId> parents = draft.provenance.parents;
  for (const auto& p : parents)
    if (!live_.count(p)) throw Error(ErrorCode::UnknownParent, "unknown parent: " + p);
  std::vector<NodeId> deps;
  if (const auto* task = std::get_if<TaskPayload>(&draft.type_payload)) {
    for (const auto& d : task->dependencies) {
      if (!live_.count(d))
        throw Error(ErrorCode::UnknownParent, "unknown dependency: " + d);
      deps.push_back(d);
    }
  }

  MemoryNode node;
  char buf[16];
  do {
    std::snprintf(buf, sizeof(buf), "n%06lld",
                  static_cast<long long>(next_node_seq_++));
  } while (live_.count(buf) || tombstones_.count(buf));
  node.id = buf;
  node.content = draft.content;
  node.content_embedding = embed_text(draft.content);
  node.node_type = draft.node_type;
  node.created_at = clock_;
  node.last_access = clock_;
  node.sensitivity = draft.sensitivity;
  node.weight = w;
  node.provenance = draft.provenance;
  node.type_payload = draft.type_payload;

  Weight before = total_weight_;
  NodeId id = node.id;
  live_.emplace(id, std::move(node));
  creation_order_.push_back(id);
  creation_seq_[id] = static_cast<int64_t>(creation_order_.size());
  total_weight_ += w;

  for (const auto& p : parents) add_edge(id, p, Relation::derivesFrom);
  for (const auto& d : deps) add_edge(id, d, Relation::requiresDep);
  if (draft.node_type == NodeType::Episodic) {
    if (!last_episodic_.empty() && live_.count(last_episodic_))
      add_edge(last_episodic_, id, Relation::temporalNext);
    last_episodic_ = id;
  }

  // First-declared dependency parent pins this node's ancestry.
  if (auto sp = structural_parent(id)) dependent_count_[*sp] += 1;

  index_insert(live_.at(id));
  if (!draft.provenance.actor.empty()) register_user(draft.provenance.actor);

  emit(AuditOp::insert, {id}, "", "", std::nullopt, std::nullopt, before,
       content_digest(draft.content));
  return id;
}

void MemoryStore::add_edge(const NodeId& src, const NodeId& dst,
                           Relation relation) {
  if (!live_.count(src) && !tombstones_.count(src))
    throw Error(ErrorCode::UnknownId, "edge src unknown: " + src);
  if (!live_.count(dst) && !tombstones_.count(dst))
    throw Error(ErrorCode::UnknownId, "edge dst unknown: " + dst);
  size_t idx = edges_.size();
  edges_.push_back({src, dst, relation});
  edges_by_node_[src].push_back(idx);
  edges_by_node_[dst].push_back(idx);
  if (is_semantic_relation(relation) || is_social_relation(relation)) {
    int ds = ++degree_[src];
    int dd = ++degree_[dst];
    max_degree_ = std::max({max_degree_, ds, dd});
  }
}

void MemoryStore::set_task_status(const NodeId& id, TaskStatus status) {
  auto it = live_.find(id);
  if (it == live_.end()) throw Error(ErrorCode::UnknownId, "unknown node: " + id);
  TaskPayload* task = it->second.task();
  if (!task) throw Error(ErrorCode::InvalidArgument, "not a task node: " + id);
  task->status = status;
}

// --- feasibility -------------------------------------------------------

std::optional<NodeId> MemoryStore::structural_parent(const NodeId& id) const {
  const MemoryNode* n = find(id);
  if (!n) return std::nullopt;
  if (!n->provenance.parents.empty()) return n->provenance.parents.front();
  if (const TaskPayload* t = n->task(); t && !t->dependencies.empty())
    return t->dependencies.front();
  return std::nullopt;
}

int MemoryStore::live_dependents(const NodeId& id) const {
  auto it = dependent_count_.find(id);
  return it == dependent_count_.end() ? 0 : it->second;
}

bool MemoryStore::is_provenance_closed(
    const std::vector<NodeId>& candidate_set) const {
  std::unordered_set<NodeId> members;
  for (const auto& id : candidate_set) {
    if (!live_.count(id)) throw Error(ErrorCode::UnknownId, "unknown node: " + id);
    members.insert(id);
  }
  for (const auto& id : members) {
    NodeId cur = id;
    while (true) {
      auto parent = structural_parent(cur);
      if (!parent || !live_.count(*parent)) break;  // dead parents do not bind
      if (!members.count(*parent)) return false;
      cur = *parent;
    }
  }
  return true;
}

std::unordered_set<NodeId> MemoryStore::pinned_prerequisites() const {
  // Transitive closure over requires edges starting from active goals.
  std::unordered_set<NodeId> pinned;
  std::deque<NodeId> frontier;
  for (const auto& [id, node] : live_) {
    const TaskPayload* t = node.task();
    if (t && t->status == TaskStatus::Active) frontier.push_back(id);
  }
  std::unordered_set<NodeId> seen(frontier.begin(), frontier.end());
  while (!frontier.empty()) {
    NodeId cur = frontier.front();
    frontier.pop_front();
    auto it = edges_by_node_.find(cur);
    if (it == edges_by_node_.end()) continue;
    for (size_t idx : it->second) {
      const MemoryEdge& e = edges_[idx];
      if (e.relation != Relation::requiresDep || e.src != cur) continue;
      if (!live_.count(e.dst)) continue;
      pinned.insert(e.dst);
      if (seen.insert(e.dst).second) frontier.push_back(e.dst);
    }
  }
  return pinned;
}

bool MemoryStore::covered_by_summary(const NodeId& id) const {
  auto it = summary_cover_.find(id);
  return it != summary_cover_.end() && it->second > 0;
}

std::vector<NodeId> MemoryStore::eviction_candidates() const {
  auto pinned = pinned_prerequisites();
  std::vector<NodeId> out;
  for (const auto& id : creation_order_) {
    if (!live_.count(id)) continue;
    if (live_dependents(id) > 0) continue;
    if (pinned.count(id) && !covered_by_summary(id)) continue;
    out.push_back(id);
  }
  return out;
}

bool MemoryStore::is_eviction_candidate(const NodeId& id) const {
  if (!live_.count(id)) return false;
  if (live_dependents(id) > 0) return false;
  auto pinned = pinned_prerequisites();
  return !pinned.count(id) || covered_by_summary(id);
}

bool MemoryStore::live_set_feasible() const {
  for (const auto& [id, node] : live_) {
    auto parent = structural_parent(id);
    (void)node;
    if (parent && !live_.count(*parent)) {
      // Dead structural parents are allowed only through summarization,
      // which leaves a tombstone.
      if (!tombstones_.count(*parent)) return false;
    }
  }
  for (const auto& pre : pinned_prerequisites())
    if (!live_.count(pre) && !covered_by_summary(pre)) return false;
  return true;
}

// --- retrieval ---------------------------------------------------------

std::vector<NodeId> MemoryStore::knn(const Embedding& query, int k,
                                     const RetrievalFilters& filters) const {
  std::vector<std::pair<double, NodeId>> scored;
  for (const auto& id : creation_order_) {
    auto it = live_.find(id);
    if (it == live_.end()) continue;
    const MemoryNode& n = it->second;
    if (filters.node_type && n.node_type != *filters.node_type) continue;
    if (filters.created_after && n.created_at < *filters.created_after) continue;
    if (filters.created_before && n.created_at > *filters.created_before) continue;
    if (filters.max_sensitivity && n.sensitivity > *filters.max_sensitivity) continue;
    scored.emplace_back(cosine(query, n.content_embedding), id);
  }
  similarity_calls_ += static_cast<int64_t>(scored.size());
  std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return creation_seq_.at(a.second) < creation_seq_.at(b.second);
  });
  if (static_cast<int>(scored.size()) > k) scored.resize(static_cast<size_t>(k));
  std::vector<NodeId> out;
  out.reserve(scored.size());
  for (auto& [s, id] : scored) out.push_back(std::move(id));
  return out;
}

std::vector<NodeId> MemoryStore::retrieve(const Embedding& query, int k,
                                          const RetrievalFilters& filters) {
  if (k < 1) throw Error(ErrorCode::InvalidFilter, "k must be >= 1");
  if (filters.max_sensitivity &&
      (*filters.max_sensitivity < 0.0 || *filters.max_sensitivity > 1.0))
    throw Error(ErrorCode::InvalidFilter, "sensitivity cap outside [0,1]");
  if (filters.created_after && filters.created_before &&
      *filters.created_after > *filters.created_before)
    throw Error(ErrorCode::InvalidFilter, "empty time window");
  if (live_.empty()) return {};

  int pool_size = std::max(4 * k, 32);
  std::vector<NodeId> pool = knn(query, pool_size, filters);

  // Rank the pool by density; the query stands in for the goal vector.
  std::vector<std::pair<double, NodeId>> ranked;
  ranked.reserve(pool.size());
  for (const auto& id : pool) {
    const MemoryNode& n = live_.at(id);
    FeatureVector f = compute_features(*this, n, query, scoring_);
    ranked.emplace_back(density(n, f, scoring_), id);
  }
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return creation_seq_.at(a.second) < creation_seq_.at(b.second);
  });

  Weight cap = static_cast<Weight>(working_set_frac_ * static_cast<double>(budget_));
  Weight used = 0;
  std::vector<NodeId> out;
  for (auto& [score, id] : ranked) {
    if (static_cast<int>(out.size()) >= k) break;
    Weight w = live_.at(id).weight;
    if (used + w > cap) continue;
    used += w;
    out.push_back(id);
  }

  for (const auto& id : out) touch(live_.at(id));
  if (!out.empty())
    emit(AuditOp::access, out, "", "retrieval", std::nullopt, std::nullopt,
         total_weight_, "");
  return out;
}

std::vector<NodeId> MemoryStore::recall(const std::string& anchor, int radius,
                                        const Embedding& goal) {
  std::vector<NodeId> roots;
  if (live_.count(anchor)) {
    roots.push_back(anchor);
  } else {
    roots = entity_postings(anchor);
  }
  if (roots.empty())
    throw Error(ErrorCode::UnknownAnchor, "unknown anchor: " + anchor);

  std::unordered_set<NodeId> seen(roots.begin(), roots.end());
  std::deque<std::pair<NodeId, int>> frontier;
  for (const auto& r : roots) frontier.emplace_back(r, 0);
  while (!frontier.empty()) {
    auto [cur, depth] = frontier.front();
    frontier.pop_front();
    if (depth >= radius) continue;
    auto it = edges_by_node_.find(cur);
    if (it == edges_by_node_.end()) continue;
    for (size_t idx : it->second) {
      const MemoryEdge& e = edges_[idx];
      if (!is_semantic_relation(e.relation) && !is_social_relation(e.relation))
        continue;
      const NodeId& other = (e.src == cur) ? e.dst : e.src;
      if (!live_.count(other)) continue;
      if (seen.insert(other).second) frontier.emplace_back(other, depth + 1);
    }
  }

  std::unordered_set<NodeId> task_connected;
  if (purpose_limitation_) {
    // Ball around active goals over task-structure edges; social nodes
    // outside it are withheld.
    std::deque<NodeId> q;
    for (const auto& [id, node] : live_) {
      const TaskPayload* t = node.task();
      if (t && t->status == TaskStatus::Active) {
        task_connected.insert(id);
        q.push_back(id);
      }
    }
    while (!q.empty()) {
      NodeId cur = q.front();
      q.pop_front();
      auto it = edges_by_node_.find(cur);
      if (it == edges_by_node_.end()) continue;
      for (size_t idx : it->second) {
        const MemoryEdge& e = edges_[idx];
        if (e.relation != Relation::requiresDep &&
            e.relation != Relation::attachesToGoal &&
            e.relation != Relation::derivesFrom)
          continue;
        const NodeId& other = (e.src == cur) ? e.dst : e.src;
        if (live_.count(other) && task_connected.insert(other).second)
          q.push_back(other);
      }
    }
  }

  std::vector<std::pair<double, NodeId>> ranked;
  for (const auto& id : seen) {
    const MemoryNode& n = live_.at(id);
    if (purpose_limitation_ && n.node_type == NodeType::Social &&
        !task_connected.count(id))
      continue;
    ranked.emplace_back(cosine(n.content_embedding, goal), id);
  }
  similarity_calls_ += static_cast<int64_t>(ranked.size());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return creation_seq_.at(a.second) < creation_seq_.at(b.second);
  });
  std::vector<NodeId> out;
  out.reserve(ranked.size());
  for (auto& [s, id] : ranked) out.push_back(std::move(id));
  return out;
}

// --- erasure -----------------------------------------------------------

ErasureReport MemoryStore::erase_cascade(const std::vector<NodeId>& targets) {
  for (const auto& id : targets)
    if (!live_.count(id)) throw Error(ErrorCode::UnknownId, "unknown node: " + id);

  // derivesFrom children, live and tombstoned, keyed by parent.
  std::unordered_map<NodeId, std::vector<NodeId>> children;
  for (const auto& [id, node] : live_)
    for (const auto& p : node.provenance.parents) children[p].push_back(id);
  for (const auto& [id, tomb] : tombstones_)
    for (const auto& p : tomb.parents) children[p].push_back(id);

  std::unordered_set<NodeId> removed_live(targets.begin(), targets.end());
  std::unordered_set<NodeId> purged_tombs;
  std::unordered_set<NodeId> degraded;

  // Phase 1: full closure over non-summary descendants (through tombstones).
  std::deque<NodeId> queue(targets.begin(), targets.end());
  std::unordered_set<NodeId> visited(targets.begin(), targets.end());
  auto support_gone = [&](const MemoryNode& summary) {
    for (const auto& p : summary.provenance.parents) {
      bool gone = removed_live.count(p) || purged_tombs.count(p);
      bool exists = live_.count(p) || tombstones_.count(p);
      if (exists && !gone) return false;
    }
    return true;
  };
  std::vector<NodeId> summaries_hit;
  while (!queue.empty()) {
    NodeId cur = queue.front();
    queue.pop_front();
    auto it = children.find(cur);
    if (it == children.end()) continue;
    for (const auto& c : it->second) {
      if (visited.count(c)) continue;
      if (auto lt = live_.find(c); lt != live_.end()) {
        if (is_summary_node(lt->second)) {
          summaries_hit.push_back(c);
          continue;  // decided in phase 2
        }
        visited.insert(c);
        removed_live.insert(c);
        queue.push_back(c);
      } else if (tombstones_.count(c)) {
        visited.insert(c);
        purged_tombs.insert(c);
        queue.push_back(c);
      }
    }
  }

  // Phase 2: summaries fall only when their entire support is erased;
  // partial loss degrades them instead. Iterate to a fixpoint since a
  // falling summary can undermine a higher one.
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(summaries_hit.begin(), summaries_hit.end());
    summaries_hit.erase(std::unique(summaries_hit.begin(), summaries_hit.end()),
                        summaries_hit.end());
    for (const auto& sid : summaries_hit) {
      if (removed_live.count(sid)) continue;
      const MemoryNode& s = live_.at(sid);
      if (support_gone(s)) {
        removed_live.insert(sid);
        degraded.erase(sid);
        changed = true;
        std::deque<NodeId> q2{sid};
        while (!q2.empty()) {
          NodeId cur = q2.front();
          q2.pop_front();
          auto it = children.find(cur);
          if (it == children.end()) continue;
          for (const auto& c : it->second) {
            if (auto lt = live_.find(c); lt != live_.end()) {
              if (is_summary_node(lt->second)) {
                summaries_hit.push_back(c);
              } else if (removed_live.insert(c).second) {
                q2.push_back(c);
              }
            } else if (tombstones_.count(c) && purged_tombs.insert(c).second) {
              q2.push_back(c);
            }
          }
        }
      } else {
        degraded.insert(sid);
      }
    }
  }

  ErasureReport report;
  Weight before = total_weight_;
  for (const auto& id : creation_order_) {
    if (!removed_live.count(id) || !live_.count(id)) continue;
    report.removed.push_back(id);
    report.freed_weight += live_.at(id).weight;
    emit(AuditOp::evict, {id}, "", "erasure request", std::nullopt,
         std::nullopt, total_weight_, "");
    remove_node_internal(id, false);
    tombstones_.erase(id);  // erased lineage leaves no record
  }
  for (const auto& id : purged_tombs) {
    tombstones_.erase(id);
    // Drop provenance edges that referenced the purged record.
    for (size_t i = 0; i < edges_.size();) {
      if (edges_[i].src == id || edges_[i].dst == id) {
        edges_.erase(edges_.begin() + static_cast<long>(i));
      } else {
        ++i;
      }
    }
  }
  if (!purged_tombs.empty()) {
    edges_by_node_.clear();
    for (size_t i = 0; i < edges_.size(); ++i) {
      edges_by_node_[edges_[i].src].push_back(i);
      edges_by_node_[edges_[i].dst].push_back(i);
    }
  }
  for (const auto& id : degraded)
    if (live_.count(id)) report.degraded.push_back(id);
  std::sort(report.degraded.begin(), report.degraded.end());

  emit(AuditOp::erase, targets, "", "erasure request", std::nullopt,
       std::nullopt, before, "");
  return report;
}

// --- policy primitives --------------------------------------------------

void MemoryStore::evict_for_policy(const NodeId& id, const std::string& policy,
                                   const std::string& why,
                                   std::optional<double> score,
                                   std::optional<FeatureVector> features) {
  if (!is_eviction_candidate(id))
    throw Error(ErrorCode::InvalidArgument, "not an eviction candidate: " + id);
  Weight before = total_weight_;
  emit(AuditOp::evict, {id}, policy, why, score, std::move(features), before,
       content_digest(live_.at(id).content));
  remove_node_internal(id, false);
}

NodeId MemoryStore::apply_summary(const std::vector<NodeId>& member_ids,
                                  const NodeDraft& summary_draft,
                                  const std::string& policy,
                                  const std::string& why) {
  std::unordered_set<NodeId> members(member_ids.begin(), member_ids.end());
  for (const auto& m : member_ids)
    if (!live_.count(m))
      throw Error(ErrorCode::MemberNotLive, "member not live: " + m);
  // External dependents would lose their ancestry.
  for (const auto& [id, node] : live_) {
    if (members.count(id)) continue;
    (void)node;
    auto sp = structural_parent(id);
    if (sp && members.count(*sp))
      throw Error(ErrorCode::InvalidArgument,
                  "member has external dependent: " + id);
  }

  Weight before = total_weight_;

  MemoryNode node;
  char buf[16];
  do {
    std::snprintf(buf, sizeof(buf), "n%06lld",
                  static_cast<long long>(next_node_seq_++));
  } while (live_.count(buf) || tombstones_.count(buf));
  node.id = buf;
  node.content = summary_draft.content;
  node.content_embedding = embed_text(summary_draft.content);
  node.node_type = NodeType::Semantic;
  node.created_at = clock_;
  node.last_access = clock_;
  node.sensitivity = summary_draft.sensitivity;
  node.weight = summary_draft.weight > 0
                    ? summary_draft.weight
                    : std::max(1, token_count(summary_draft.content));
  node.provenance.source = kSummarySource;
  node.provenance.consent = true;
  node.provenance.parents = member_ids;
  node.type_payload = summary_draft.type_payload;
  if (!std::holds_alternative<SemanticPayload>(node.type_payload))
    node.type_payload = SemanticPayload{};

  NodeId sid = node.id;
  live_.emplace(sid, std::move(node));
  creation_order_.push_back(sid);
  creation_seq_[sid] = static_cast<int64_t>(creation_order_.size());
  total_weight_ += live_.at(sid).weight;
  index_insert(live_.at(sid));

  // Provenance edges persist into tombstone territory.
  for (const auto& m : member_ids) {
    add_edge(sid, m, Relation::derivesFrom);
    summary_cover_[m] += 1;
  }

  std::vector<NodeId> affected;
  affected.push_back(sid);
  for (const auto& m : member_ids) affected.push_back(m);
  std::string hash = content_digest(live_.at(sid).content);

  for (const auto& m : member_ids) remove_node_internal(m, true);
  emit(AuditOp::summarize, affected, policy, why, std::nullopt, std::nullopt,
       before, hash);
  return sid;
}

void MemoryStore::record_policy_trigger(const std::string& policy,
                                        Weight before, Weight after,
                                        const std::string& note) {
  AuditEvent e;
  e.turn = clock_;
  e.op = AuditOp::policy_trigger;
  e.policy = policy;
  e.params_digest = params_digest_;
  e.rationale = note;
  e.budget_before = before;
  e.budget_after = after;
  e.privacy_accountant = accountant_;
  log_->record(std::move(e));
}

// --- index views --------------------------------------------------------

std::vector<NodeId> MemoryStore::by_recency() const {
  std::vector<NodeId> out;
  out.reserve(recency_index_.size());
  for (const auto& [last, seq, id] : recency_index_) out.push_back(id);
  return out;
}

std::vector<NodeId> MemoryStore::by_creation() const { return live_ids(); }

std::vector<NodeId> MemoryStore::entity_postings(const std::string& entity) const {
  auto it = entity_index_.find(canonical_entity(entity));
  if (it == entity_index_.end()) return {};
  std::vector<NodeId> out(it->second.begin(), it->second.end());
  std::sort(out.begin(), out.end(), [&](const NodeId& a, const NodeId& b) {
    return creation_seq_.at(a) < creation_seq_.at(b);
  });
  return out;
}

int MemoryStore::degree(const NodeId& id) const {
  auto it = degree_.find(id);
  return it == degree_.end() ? 0 : it->second;
}

int MemoryStore::max_degree() const {
  if (degree_dirty_) {
    max_degree_ = 0;
    for (const auto& [id, node] : live_) {
      (void)node;
      auto it = degree_.find(id);
      if (it != degree_.end()) max_degree_ = std::max(max_degree_, it->second);
    }
    degree_dirty_ = false;
  }
  return max_degree_;
}

int64_t MemoryStore::max_access_count() const {
  if (max_access_dirty_) {
    max_access_count_ = 0;
    for (const auto& [id, node] : live_)
      max_access_count_ = std::max(max_access_count_, node.access_count);
    max_access_dirty_ = false;
  }
  return max_access_count_;
}

Weight MemoryStore::recompute_total_weight() const {
  Weight sum = 0;
  for (const auto& [id, node] : live_) sum += node.weight;
  return sum;
}

// --- internals ----------------------------------------------------------

void MemoryStore::touch(MemoryNode& node) {
  recency_index_.erase({node.last_access, creation_seq_.at(node.id), node.id});
  node.last_access = clock_;
  node.access_count += 1;
  recency_index_.insert({node.last_access, creation_seq_.at(node.id), node.id});
  if (!max_access_dirty_)
    max_access_count_ = std::max(max_access_count_, node.access_count);
}

void MemoryStore::index_insert(const MemoryNode& node) {
  recency_index_.insert({node.last_access, creation_seq_.at(node.id), node.id});
  for (const auto& ent : node_entities(node)) {
    std::string key = canonical_entity(ent);
    if (!key.empty()) entity_index_[key].insert(node.id);
  }
}

void MemoryStore::index_remove(const MemoryNode& node) {
  recency_index_.erase({node.last_access, creation_seq_.at(node.id), node.id});
  for (const auto& ent : node_entities(node)) {
    std::string key = canonical_entity(ent);
    auto it = entity_index_.find(key);
    if (it != entity_index_.end()) {
      it->second.erase(node.id);
      if (it->second.empty()) entity_index_.erase(it);
    }
  }
  if (node.access_count >= max_access_count_) max_access_dirty_ = true;
}

void MemoryStore::remove_node_internal(const NodeId& id,
                                       bool keep_summary_edges) {
  auto it = live_.find(id);
  if (it == live_.end()) return;
  MemoryNode& node = it->second;

  if (auto sp = structural_parent(id)) {
    auto dc = dependent_count_.find(*sp);
    if (dc != dependent_count_.end() && --dc->second <= 0)
      dependent_count_.erase(dc);
  }
  if (is_summary_node(node)) {
    for (const auto& m : node.provenance.parents) {
      auto sc = summary_cover_.find(m);
      if (sc != summary_cover_.end() && --sc->second <= 0)
        summary_cover_.erase(sc);
    }
  }

  index_remove(node);
  total_weight_ -= node.weight;
  if (last_episodic_ == id) last_episodic_.clear();

  Tombstone tomb;
  tomb.id = id;
  tomb.node_type = node.node_type;
  tomb.content_hash = content_digest(node.content);
  tomb.actor = node.provenance.actor;
  tomb.parents = node.provenance.parents;
  tomb.summary = is_summary_node(node);
  tombstones_.emplace(id, std::move(tomb));

  // Drop incident edges; derivesFrom edges pointing at this node survive as
  // provenance when the removal is a summarization.
  bool removed_any = false;
  for (size_t i = 0; i < edges_.size();) {
    const MemoryEdge& e = edges_[i];
    bool incident = (e.src == id || e.dst == id);
    bool preserved = keep_summary_edges && e.dst == id &&
                     e.relation == Relation::derivesFrom && live_.count(e.src);
    if (incident && !preserved) {
      if (is_semantic_relation(e.relation) || is_social_relation(e.relation)) {
        auto dec = [&](const NodeId& nid) {
          auto d = degree_.find(nid);
          if (d != degree_.end() && --d->second <= 0) degree_.erase(d);
        };
        dec(e.src);
        dec(e.dst);
        degree_dirty_ = true;
      }
      edges_.erase(edges_.begin() + static_cast<long>(i));
      removed_any = true;
    } else {
      ++i;
    }
  }
  if (removed_any) {
    edges_by_node_.clear();
    for (size_t i = 0; i < edges_.size(); ++i) {
      edges_by_node_[edges_[i].src].push_back(i);
      edges_by_node_[edges_[i].dst].push_back(i);
    }
  }

  live_.erase(it);
}

void MemoryStore::emit(AuditOp op, std::vector<NodeId> ids,
                       const std::string& policy, const std::string& why,
                       std::optional<double> score,
                       std::optional<FeatureVector> features, Weight before,
                       const std::string& hash) {
  AuditEvent e;
  e.turn = clock_;
  e.op = op;
  e.node_ids = std::move(ids);
  e.policy = policy;
  e.params_digest = params_digest_;
  e.features = std::move(features);
  e.score = score;
  e.content_hash = hash;
  e.rationale = why;
  e.budget_before = before;
  Weight after = total_weight_;
  if (op == AuditOp::evict && !e.node_ids.empty()) {
    // emitted just before the removal lands
    auto it = live_.find(e.node_ids.front());
    if (it != live_.end()) after -= it->second.weight;
  }
  e.budget_after = after;
  e.privacy_accountant = accountant_;
  log_->record(std::move(e));
}

// --- snapshot / restore ---------------------------------------------------

StoreSnapshot MemoryStore::snapshot() const {
  StoreSnapshot snap;
  snap.budget = budget_;
  snap.type_budgets = type_budgets_;
  snap.clock = clock_;
  snap.next_node_seq = next_node_seq_;
  for (const auto& id : creation_order_) {
    auto it = live_.find(id);
    if (it != live_.end()) snap.nodes.push_back(it->second);
  }
  snap.edges = edges_;
  std::vector<NodeId> tomb_ids;
  for (const auto& [id, t] : tombstones_) tomb_ids.push_back(id);
  std::sort(tomb_ids.begin(), tomb_ids.end());
  for (const auto& id : tomb_ids) snap.tombstones.push_back(tombstones_.at(id));
  snap.known_users.assign(known_users_.begin(), known_users_.end());
  return snap;
}

MemoryStore MemoryStore::restore(const StoreSnapshot& snap,
                                 ScoringConfig scoring) {
  MemoryStore s;
  s.scoring_ = std::move(scoring);
  if (snap.budget <= 0)
    throw Error(ErrorCode::MalformedDocument, "budget must be positive");
  s.budget_ = snap.budget;
  s.type_budgets_ = snap.type_budgets;
  s.clock_ = snap.clock;
  s.next_node_seq_ = snap.next_node_seq;

  for (const auto& t : snap.tombstones) s.tombstones_.emplace(t.id, t);
  for (const auto& node : snap.nodes) {
    if (s.live_.count(node.id))
      throw Error(ErrorCode::MalformedDocument, "duplicate node id: " + node.id);
    s.live_.emplace(node.id, node);
    s.creation_order_.push_back(node.id);
    s.creation_seq_[node.id] = static_cast<int64_t>(s.creation_order_.size());
    s.total_weight_ += node.weight;
  }
  for (const auto& [id, node] : s.live_) {
    (void)node;
    if (auto sp = s.structural_parent(id))
      if (s.live_.count(*sp)) s.dependent_count_[*sp] += 1;
    if (is_summary_node(s.live_.at(id)))
      for (const auto& m : s.live_.at(id).provenance.parents)
        s.summary_cover_[m] += 1;
  }
  for (const auto& e : snap.edges) {
    bool src_ok = s.live_.count(e.src) || s.tombstones_.count(e.src);
    bool dst_ok = s.live_.count(e.dst) || s.tombstones_.count(e.dst);
    if (!src_ok || !dst_ok)
      throw Error(ErrorCode::DanglingReference,
                  "edge references unknown node: " + e.src + " -> " + e.dst);
    size_t idx = s.edges_.size();
    s.edges_.push_back(e);
    s.edges_by_node_[e.src].push_back(idx);
    s.edges_by_node_[e.dst].push_back(idx);
    if (is_semantic_relation(e.relation) || is_social_relation(e.relation)) {
      int ds = ++s.degree_[e.src];
      int dd = ++s.degree_[e.dst];
      s.max_degree_ = std::max({s.max_degree_, ds, dd});
    }
  }
  for (const auto& id : s.creation_order_) {
    const MemoryNode& n = s.live_.at(id);
    s.index_insert(n);
    s.max_access_count_ = std::max(s.max_access_count_, n.access_count);
    if (n.node_type == NodeType::Episodic) s.last_episodic_ = id;
  }
  for (const auto& u : snap.known_users) s.known_users_.insert(u);
  return s;
}

}  // namespace mars
