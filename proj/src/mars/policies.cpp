#include "mars/policies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "json.hpp"

namespace mars {

using nlohmann::json;

const char* policy_name(PolicyId p) {
  switch (p) {
    case PolicyId::Fifo: return "fifo";
    case PolicyId::Lru: return "lru";
    case PolicyId::PriorityDecay: return "priority";
    case PolicyId::ReflectionSummary: return "reflection";
    case PolicyId::RandomDrop: return "random";
    case PolicyId::Hybrid: return "hybrid";
  }
  return "fifo";
}

std::optional<PolicyId> policy_from_name(const std::string& name) {
  if (name == "fifo") return PolicyId::Fifo;
  if (name == "lru") return PolicyId::Lru;
  if (name == "priority") return PolicyId::PriorityDecay;
  if (name == "reflection") return PolicyId::ReflectionSummary;
  if (name == "random") return PolicyId::RandomDrop;
  if (name == "hybrid") return PolicyId::Hybrid;
  return std::nullopt;
}

std::string outcome_to_json(const PolicyOutcome& o) {
  json j;
  j["policy"] = policy_name(o.policy);
  json ev = json::array();
  for (const auto& [id, why] : o.evicted)
    ev.push_back(json{{"id", id}, {"why", why}});
  j["evicted"] = std::move(ev);
  json su = json::array();
  for (const auto& s : o.summarized)
    su.push_back(json{{"cluster", s.cluster},
                      {"summary", s.summary_id},
                      {"distortion", s.distortion}});
  j["summarized"] = std::move(su);
  j["freed_weight"] = o.freed_weight;
  j["phases"] = o.phases_executed;
  j["counters"] = json{{"nodes_touched", o.op_counters.nodes_touched},
                       {"pq_ops", o.op_counters.pq_ops},
                       {"similarity_calls", o.op_counters.similarity_calls}};
  j["needs_followup"] = o.needs_followup;
  j["dp_tiebreak_used"] = o.dp_tiebreak_used;
  j["dp_fallback_argmax"] = o.dp_fallback_argmax;
  return j.dump();
}

namespace {

struct QueueEntry {
  double key;
  Turn created;
  NodeId id;
  bool operator<(const QueueEntry& other) const {
    if (key != other.key) return key < other.key;
    if (created != other.created) return created < other.created;
    return id < other.id;
  }
};

// Shared deterministic eviction loop: pops ascending (key, created_at, id),
// re-exposes the structural parent after each removal, and rebuilds after an
// active task dies (its prerequisites unpin).
struct OrderedPass {
  MemoryStore& store;
  PolicyOutcome& out;
  std::string label;
  // nullopt marks a candidate ineligible for this pass.
  std::function<std::optional<double>(const MemoryNode&)> key;
  std::function<std::pair<std::string, std::optional<double>>(const MemoryNode&, double)>
      annotate;
  bool count_pq = false;

  std::set<QueueEntry> queue;

  void build() {
    queue.clear();
    for (const auto& id : store.eviction_candidates()) {
      const MemoryNode& n = store.get(id);
      if (auto k = key(n)) queue.insert({*k, n.created_at, id});
    }
  }

  // Returns evictions performed; stops at budget or queue exhaustion.
  int run() {
    int evictions = 0;
    while (store.over_budget()) {
      if (queue.empty()) break;
      QueueEntry top = *queue.begin();
      queue.erase(queue.begin());
      if (count_pq) out.op_counters.pq_ops += 1;
      if (!store.contains(top.id)) continue;
      const MemoryNode& n = store.get(top.id);
      const TaskPayload* task = n.task();
      bool was_active_task = task && task->status == TaskStatus::Active;
      auto parent = store.structural_parent(top.id);
      Weight w = n.weight;
      auto [why, score] = annotate(n, top.key);
      store.evict_for_policy(top.id, label, why, score, std::nullopt);
      out.evicted.emplace_back(top.id, why);
      out.freed_weight += w;
      out.op_counters.nodes_touched += 1;
      ++evictions;
      if (was_active_task) {
        build();  // unpinned prerequisites enter the pool
      } else if (parent && store.contains(*parent) &&
                 store.is_eviction_candidate(*parent)) {
        out.op_counters.nodes_touched += 1;
        const MemoryNode& p = store.get(*parent);
        if (auto k = key(p)) {
          queue.insert({*k, p.created_at, *parent});
          if (count_pq) out.op_counters.pq_ops += 1;
        }
      }
    }
    return evictions;
  }
};

[[noreturn]] void raise_unsatisfiable(MemoryStore& store, const std::string& policy) {
  store.record_policy_trigger(policy, store.total_weight(), store.total_weight(),
                              "budget unsatisfiable: structure pins weight");
  throw Error(ErrorCode::BudgetUnsatisfiable,
              "budget unsatisfiable under " + policy);
}

void finish_trigger(MemoryStore& store, PolicyOutcome& out, Weight before,
                    int64_t sim_calls_before) {
  out.op_counters.similarity_calls =
      store.similarity_calls() - sim_calls_before;
  store.record_policy_trigger(policy_name(out.policy), before,
                              store.total_weight(), outcome_to_json(out));
}

double median_abs(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  for (auto& x : xs) x = std::abs(x);
  std::sort(xs.begin(), xs.end());
  size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

int reflection_pass(MemoryStore& store, const PolicyContext& ctx,
                    PolicyOutcome& out, const std::string& label) {
  auto clusters = cluster_episodes(store, ctx.reflection);
  int applied = 0;
  for (const auto& cluster : clusters) {
    if (!store.over_budget()) break;
    if (applied >= ctx.reflection.max_summaries_per_trigger) break;
    SummaryDraft draft = summarize_cluster(cluster, store, ctx.rules);
    ConsolidationResult res =
        consolidate(store, cluster, draft, ctx.reflection, label);
    if (!res.applied) continue;
    out.summarized.push_back({cluster.member_ids, res.summary_id, res.distortion});
    out.freed_weight += res.freed_weight;
    ++applied;
  }
  return applied;
}

int priority_pass(MemoryStore& store, const PolicyContext& ctx,
                  PolicyOutcome& out, const std::string& label) {
  const ScoringConfig& cfg = store.scoring();
  Turn now = store.now();

  // Hysteresis: a node that survived an eligible pass is evicted ahead of
  // its peers unless its key improved by the margin since then.
  std::vector<double> raw_keys;
  for (const auto& id : store.eviction_candidates()) {
    const MemoryNode& n = store.get(id);
    raw_keys.push_back(importance(store, n, cfg, now) /
                       static_cast<double>(n.weight));
  }
  double margin = ctx.hysteresis_margin_frac * median_abs(raw_keys);
  auto& marks = store.hysteresis_marks();

  auto raw_key = [&](const MemoryNode& n) {
    return importance(store, n, cfg, now) / static_cast<double>(n.weight);
  };

  OrderedPass pass{
      store,
      out,
      label,
      [&](const MemoryNode& n) -> std::optional<double> {
        double k = raw_key(n);
        auto it = marks.find(n.id);
        bool penalized = it != marks.end() && k < it->second + margin;
        return penalized ? k - 1e6 : k;  // penalized tier drains first
      },
      [&](const MemoryNode& n, double) {
        double imp = importance(store, n, cfg, now);
        double rec = std::exp(-cfg.lambda_age *
                              static_cast<double>(std::max<Turn>(0, now - n.last_access)));
        std::string why = rationale(
            "evicted", {{"low importance per token", 1.0 - imp},
                        {"low recency", 1.0 - rec},
                        {"high sensitivity", cfg.lambda_priv * n.sensitivity}});
        return std::make_pair(why, std::optional<double>(raw_key(n)));
      },
      /*count_pq=*/true};
  pass.build();
  int evicted = pass.run();

  // Survivors that were eligible during an over-budget pass get marked.
  if (evicted > 0 || !pass.queue.empty()) {
    for (const auto& entry : pass.queue) {
      if (!store.contains(entry.id)) continue;
      double k = raw_key(store.get(entry.id));
      auto it = marks.find(entry.id);
      if (it == marks.end()) {
        marks.emplace(entry.id, k);
      } else if (k >= it->second + margin) {
        marks.erase(it);  // genuinely improved; clean slate
      }
    }
  }
  return evicted;
}

}  // namespace

PolicyOutcome apply_fifo(MemoryStore& store, const PolicyContext& ctx) {
  (void)ctx;
  PolicyOutcome out;
  out.policy = PolicyId::Fifo;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }
  OrderedPass pass{store, out, "fifo",
                   [](const MemoryNode& n) -> std::optional<double> {
                     return static_cast<double>(n.created_at);
                   },
                   [&](const MemoryNode& n, double) {
                     double age = static_cast<double>(store.now() - n.created_at);
                     std::string why =
                         rationale("evicted", {{"oldest feasible leaf", age}});
                     return std::make_pair(why, std::optional<double>());
                   },
                   /*count_pq=*/false};
  pass.build();
  pass.run();
  if (store.over_budget()) raise_unsatisfiable(store, "fifo");
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_lru(MemoryStore& store, const PolicyContext& ctx) {
  (void)ctx;
  PolicyOutcome out;
  out.policy = PolicyId::Lru;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }
  OrderedPass pass{store, out, "lru",
                   [](const MemoryNode& n) -> std::optional<double> {
                     return static_cast<double>(n.last_access);
                   },
                   [&](const MemoryNode& n, double) {
                     double stale = static_cast<double>(store.now() - n.last_access);
                     std::string why = rationale(
                         "evicted", {{"least recently used", stale}});
                     return std::make_pair(why, std::optional<double>());
                   },
                   /*count_pq=*/false};
  pass.build();
  pass.run();
  if (store.over_budget()) raise_unsatisfiable(store, "lru");
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_priority_decay(MemoryStore& store, const PolicyContext& ctx) {
  PolicyOutcome out;
  out.policy = PolicyId::PriorityDecay;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }
  priority_pass(store, ctx, out, "priority");
  if (store.over_budget()) raise_unsatisfiable(store, "priority");
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_random_drop(MemoryStore& store, const PolicyContext& ctx) {
  PolicyOutcome out;
  out.policy = PolicyId::RandomDrop;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }
  Rng rng = Rng::substream(ctx.seed, "policy");
  std::vector<NodeId> pool = store.eviction_candidates();
  while (store.over_budget()) {
    if (pool.empty()) raise_unsatisfiable(store, "random");
    size_t idx = static_cast<size_t>(rng.next_below(pool.size()));
    NodeId id = pool[idx];
    pool.erase(pool.begin() + static_cast<long>(idx));
    if (!store.contains(id) || !store.is_eviction_candidate(id)) continue;
    const MemoryNode& n = store.get(id);
    const TaskPayload* task = n.task();
    bool was_active_task = task && task->status == TaskStatus::Active;
    auto parent = store.structural_parent(id);
    Weight w = n.weight;
    std::string why = rationale("evicted", {{"uniform random draw", 1.0}});
    store.evict_for_policy(id, "random", why, std::nullopt, std::nullopt);
    out.evicted.emplace_back(id, why);
    out.freed_weight += w;
    out.op_counters.nodes_touched += 1;
    if (was_active_task) {
      pool = store.eviction_candidates();
    } else if (parent && store.contains(*parent) &&
               store.is_eviction_candidate(*parent)) {
      out.op_counters.nodes_touched += 1;
      pool.push_back(*parent);
    }
  }
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_reflection_summary(MemoryStore& store,
                                       const PolicyContext& ctx) {
  PolicyOutcome out;
  out.policy = PolicyId::ReflectionSummary;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }
  out.phases_executed.push_back("reflect");
  reflection_pass(store, ctx, out, "reflection");
  if (store.over_budget()) {
    out.needs_followup = true;
    out.phases_executed.push_back("priority");
    priority_pass(store, ctx, out, "reflection");
    if (store.over_budget()) raise_unsatisfiable(store, "reflection");
  }
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_hybrid(MemoryStore& store, const PolicyContext& ctx) {
  PolicyOutcome out;
  out.policy = PolicyId::Hybrid;
  Weight before = store.total_weight();
  int64_t sims = store.similarity_calls();
  const ScoringConfig& cfg = store.scoring();
  Turn now = store.now();

  if (!store.over_budget()) {
    finish_trigger(store, out, before, sims);
    return out;
  }

  // Phase 1: temporal skim of clearly stale leaves, oldest first.
  out.phases_executed.push_back("temporal");
  {
    OrderedPass pass{store, out, "hybrid",
                     [&](const MemoryNode& n) -> std::optional<double> {
                       if (now - n.last_access <= ctx.stale_age)
                         return std::nullopt;
                       return static_cast<double>(n.created_at);
                     },
                     [&](const MemoryNode& n, double) {
                       double stale = static_cast<double>(now - n.last_access);
                       std::string why = rationale(
                           "evicted", {{"oldest stale leaf", stale}});
                       return std::make_pair(why, std::optional<double>());
                     },
                     /*count_pq=*/false};
    pass.build();
    pass.run();
  }

  // Phase 2: consolidate redundant episodic clusters.
  if (store.over_budget()) {
    out.phases_executed.push_back("reflect");
    reflection_pass(store, ctx, out, "hybrid");
  }

  // Phase 3: density eviction, lowest utility per token first.
  if (store.over_budget()) {
    out.phases_executed.push_back("importance");
    OrderedPass pass{store, out, "hybrid",
                     [&](const MemoryNode& n) -> std::optional<double> {
                       FeatureVector f = compute_features(store, n, ctx.goal, cfg);
                       return density(n, f, cfg);
                     },
                     [&](const MemoryNode& n, double key) {
                       FeatureVector f = compute_features(store, n, ctx.goal, cfg);
                       double proxy = utility_proxy(n.node_type, f, cfg);
                       std::string why = rationale(
                           "evicted",
                           {{"low utility proxy", 1.0 - proxy},
                            {"high sensitivity", cfg.lambda_priv * n.sensitivity}});
                       return std::make_pair(why, std::optional<double>(key));
                     },
                     /*count_pq=*/true};
    pass.build();
    pass.run();
  }

  // Phase 4: sensitivity-weighted removal with the DP tie-break inside the
  // tolerance band.
  if (store.over_budget()) {
    out.phases_executed.push_back("privacy");
    bool dp_on = ctx.dp.enabled && ctx.accountant != nullptr;
    Rng rng = Rng::substream(ctx.seed, "mechanism");

    // Frozen modular proxy view for the mechanism's score.
    std::map<std::string, double> proxy_values;
    std::map<std::string, double> sens;
    double lipschitz = 0.0;
    double max_w = 1.0;
    if (dp_on) {
      for (const auto& id : store.live_ids()) {
        const MemoryNode& n = store.get(id);
        FeatureVector f = compute_features(store, n, ctx.goal, cfg);
        double proxy = utility_proxy(n.node_type, f, cfg);
        proxy_values[id] = proxy;
        sens[id] = n.sensitivity;
        lipschitz = std::max(lipschitz, proxy / static_cast<double>(n.weight));
        max_w = std::max(max_w, static_cast<double>(n.weight));
      }
    }
    UtilityModel proxy_model = UtilityModel::modular(proxy_values);
    double delta_q = ctx.dp.sensitivity_bound > 0.0
                         ? ctx.dp.sensitivity_bound
                         : delta_q_bound(lipschitz, max_w, cfg.lambda_priv);

    while (store.over_budget()) {
      std::vector<NodeId> candidates = store.eviction_candidates();
      if (candidates.empty()) raise_unsatisfiable(store, "hybrid");

      Turn max_age = 0;
      for (const auto& id : store.live_ids())
        max_age = std::max(max_age, now - store.get(id).last_access);
      struct Scored {
        NodeId id;
        double key;
        double age_norm;
        double imp;
      };
      std::vector<Scored> scored;
      for (const auto& id : candidates) {
        const MemoryNode& n = store.get(id);
        double age = static_cast<double>(std::max<Turn>(0, now - n.last_access));
        double age_norm = max_age > 0 ? age / static_cast<double>(max_age) : 0.0;
        double imp = importance(store, n, cfg, now);
        scored.push_back({id, removal_priority(n.sensitivity, age_norm, imp),
                          age_norm, imp});
      }
      std::sort(scored.begin(), scored.end(), [&](const Scored& a, const Scored& b) {
        if (a.key != b.key) return a.key > b.key;  // highest priority first
        const MemoryNode& na = store.get(a.id);
        const MemoryNode& nb = store.get(b.id);
        if (na.created_at != nb.created_at) return na.created_at < nb.created_at;
        return a.id < b.id;
      });

      std::vector<double> keys;
      for (const auto& s : scored) keys.push_back(s.key);
      double tol = ctx.dp.tie_tolerance_frac * median_abs(keys);
      size_t band_end = 1;
      while (band_end < scored.size() &&
             scored[band_end].key >= scored[0].key - tol)
        ++band_end;

      size_t pick = 0;
      if (dp_on && band_end >= 2) {
        std::vector<RetentionOutcome> outcomes;
        std::vector<NodeId> live_now = store.live_ids();
        for (size_t i = 0; i < band_end; ++i) {
          RetentionOutcome o;
          for (const auto& id : live_now)
            if (id != scored[i].id) o.ids.push_back(id);
          outcomes.push_back(std::move(o));
        }
        try {
          ExpMechResult res = exp_mechanism_select(
              outcomes, proxy_model, sens, cfg.lambda_priv, ctx.dp, delta_q,
              *ctx.accountant, ctx.dp_user, rng);
          pick = res.index;
          out.dp_tiebreak_used = true;
          store.set_accountant_snapshot(ctx.accountant->total(ctx.dp_user));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::PrivacyBudgetExhausted) throw;
          out.dp_fallback_argmax = true;
          pick = 0;
        }
      }

      const Scored& chosen = scored[pick];
      const MemoryNode& n = store.get(chosen.id);
      Weight w = n.weight;
      std::string why =
          rationale("evicted", {{"high sensitivity", n.sensitivity},
                                {"old age", chosen.age_norm},
                                {"low importance", 1.0 - chosen.imp}});
      store.evict_for_policy(chosen.id, "hybrid", why, chosen.key, std::nullopt);
      out.evicted.emplace_back(chosen.id, why);
      out.freed_weight += w;
      out.op_counters.nodes_touched += 1;
    }
  }

  if (store.over_budget()) raise_unsatisfiable(store, "hybrid");
  finish_trigger(store, out, before, sims);
  return out;
}

PolicyOutcome apply_policy(MemoryStore& store, PolicyId policy,
                           const PolicyContext& ctx) {
  switch (policy) {
    case PolicyId::Fifo: return apply_fifo(store, ctx);
    case PolicyId::Lru: return apply_lru(store, ctx);
    case PolicyId::PriorityDecay: return apply_priority_decay(store, ctx);
    case PolicyId::ReflectionSummary: return apply_reflection_summary(store, ctx);
    case PolicyId::RandomDrop: return apply_random_drop(store, ctx);
    case PolicyId::Hybrid: return apply_hybrid(store, ctx);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown policy");
}

}  // namespace mars
