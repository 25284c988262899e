#include "mars/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "json.hpp"
#include "mars/dp.hpp"
#include "mars/policies.hpp"
#include "mars/reflection.hpp"

namespace mars {

using nlohmann::json;

bool VerificationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string VerificationReport::to_json() const {
  json j = json::array();
  for (const auto& c : checks)
    j.push_back(json{{"name", c.name},
                     {"pass", c.pass},
                     {"expected_fail", c.expected_fail},
                     {"detail", c.detail}});
  return json{{"checks", j}, {"all_pass", all_pass()}}.dump(2) + "\n";
}

namespace {

std::string item_id(int i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "i%03d", i);
  return buf;
}

}  // namespace

RetentionInstance random_coverage_instance(Rng& rng, int max_items,
                                           int max_depth) {
  RetentionInstance inst;
  inst.utility_kind = UtilityKind::CoverageSubmodular;
  int n = rng.next_int(4, max_items);
  int topics = rng.next_int(3, 10);
  for (int t = 0; t < topics; ++t)
    inst.topic_values[t] = 0.2 + 1.8 * rng.next_unit();

  std::vector<int> depth(static_cast<size_t>(n), 0);
  Weight total = 0;
  for (int i = 0; i < n; ++i) {
    RetentionItem it;
    it.id = item_id(i);
    it.weight = rng.next_int(1, 8);
    int k = rng.next_int(1, 3);
    for (int c = 0; c < k; ++c) it.topics.push_back(rng.next_int(0, topics - 1));
    if (i > 0 && rng.next_unit() < 0.5) {
      int p = rng.next_int(0, i - 1);
      if (depth[static_cast<size_t>(p)] < max_depth - 1) {
        it.parent = item_id(p);
        depth[static_cast<size_t>(i)] = depth[static_cast<size_t>(p)] + 1;
      }
    }
    total += it.weight;
    inst.items.push_back(std::move(it));
  }
  inst.budget = std::max<Weight>(1, static_cast<Weight>(
                                        static_cast<double>(total) *
                                        (0.3 + 0.5 * rng.next_unit())));
  return inst;
}

RetentionInstance random_modular_instance(Rng& rng, int max_items,
                                          int max_depth) {
  RetentionInstance inst;
  inst.utility_kind = UtilityKind::Modular;
  int n = rng.next_int(4, max_items);
  std::vector<int> depth(static_cast<size_t>(n), 0);
  Weight total = 0;
  for (int i = 0; i < n; ++i) {
    RetentionItem it;
    it.id = item_id(i);
    it.weight = rng.next_int(1, 8);
    it.value = rng.next_unit() * static_cast<double>(it.weight);
    if (i > 0 && rng.next_unit() < 0.5) {
      int p = rng.next_int(0, i - 1);
      if (depth[static_cast<size_t>(p)] < max_depth - 1) {
        it.parent = item_id(p);
        depth[static_cast<size_t>(i)] = depth[static_cast<size_t>(p)] + 1;
      }
    }
    total += it.weight;
    inst.items.push_back(std::move(it));
  }
  inst.budget = std::max<Weight>(1, static_cast<Weight>(
                                        static_cast<double>(total) *
                                        (0.3 + 0.5 * rng.next_unit())));
  return inst;
}

FuzzStore random_fuzz_store(Rng& rng, bool adversarial) {
  static const char* vocab[] = {"meeting", "garden", "coffee",  "planet",
                                "violin", "server", "harvest", "bridge",
                                "signal", "lantern"};
  StoreSnapshot snap;
  int n = adversarial ? rng.next_int(20, 60) : rng.next_int(10, 45);
  Turn clock = 200;
  snap.clock = clock;
  snap.next_node_seq = n + 1;

  Turn created = 0;
  for (int i = 0; i < n; ++i) {
    MemoryNode node;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "n%06d", i + 1);
    node.id = buf;
    created += rng.next_int(0, 4);
    node.created_at = std::min<Turn>(created, clock);
    node.last_access =
        node.created_at + rng.next_int(0, static_cast<int>(clock - node.created_at));
    node.access_count = rng.next_int(0, 12);
    node.weight = adversarial && rng.next_unit() < 0.2 ? rng.next_int(40, 200)
                                                       : rng.next_int(1, 30);
    node.sensitivity = rng.next_unit() < 0.5 ? 0.0 : rng.next_unit();

    int words = rng.next_int(2, 6);
    for (int w = 0; w < words; ++w) {
      if (w) node.content += ' ';
      node.content += vocab[rng.next_below(10)];
    }
    node.content_embedding = embed_text(node.content);

    double roll = rng.next_unit();
    if (roll < 0.55) {
      node.node_type = NodeType::Episodic;
      node.type_payload = EpisodicPayload{"event", node.content, {}, 0.0};
    } else if (roll < 0.75) {
      node.node_type = NodeType::Semantic;
      node.type_payload = SemanticPayload{node.content, {}, 1.0, 0.5};
    } else if (roll < 0.88) {
      node.node_type = NodeType::Social;
      node.type_payload = SocialPayload{"person", "friendOf", {}, {}};
    } else {
      node.node_type = NodeType::Task;
      TaskPayload t;
      t.goal = "goal " + node.content;
      t.status = rng.next_unit() < 0.5 ? TaskStatus::Active : TaskStatus::Completed;
      if (i > 0 && rng.next_unit() < 0.6) {
        char dep[16];
        std::snprintf(dep, sizeof(dep), "n%06d",
                      rng.next_int(1, i));
        t.dependencies.push_back(dep);
      }
      node.type_payload = t;
    }

    // Dependency forest: long chains under adversarial generation.
    if (i > 0 && node.node_type != NodeType::Task) {
      double p_link = adversarial ? 0.8 : 0.4;
      if (rng.next_unit() < p_link) {
        char parent[16];
        int pi = adversarial ? i : rng.next_int(1, i);
        std::snprintf(parent, sizeof(parent), "n%06d", pi);
        node.provenance.parents.push_back(parent);
      }
    }
    snap.nodes.push_back(std::move(node));
  }

  for (const auto& node : snap.nodes) {
    for (const auto& p : node.provenance.parents)
      snap.edges.push_back({node.id, p, Relation::derivesFrom});
    if (const TaskPayload* t = std::get_if<TaskPayload>(&node.type_payload))
      for (const auto& d : t->dependencies)
        snap.edges.push_back({node.id, d, Relation::requiresDep});
  }

  Weight total = 0;
  for (const auto& node : snap.nodes) total += node.weight;
  snap.budget = std::max<Weight>(
      1, static_cast<Weight>(static_cast<double>(total) *
                             (0.4 + 0.4 * rng.next_unit())));
  Weight q = snap.budget / kNumNodeTypes;
  snap.type_budgets = {q, q, q, snap.budget - 3 * q};

  FuzzStore out{MemoryStore::restore(snap), {}, 0.0};
  for (const auto& node : snap.nodes) {
    double rate = rng.next_unit();
    out.values[node.id] = rate * static_cast<double>(node.weight);
    out.lipschitz = std::max(out.lipschitz, rate);
  }
  return out;
}

namespace {

CheckResult check_greedy_approximation(const VerifyOptions& opt) {
  Rng rng = Rng::substream(opt.seed, "greedy");
  double min_ratio = 1e300;
  double sum_ratio = 0.0;
  int n = 0;
  for (int i = 0; i < opt.greedy_instances; ++i) {
    RetentionInstance inst = random_coverage_instance(rng, 14, 3);
    Optimum opt_value = brute_force_optimum(inst);
    if (opt_value.value <= 1e-12) continue;
    UtilityModel model = inst.build_model();
    double v = model.evaluate(best_of_greedy_and_singleton(inst));
    double ratio = v / opt_value.value;
    min_ratio = std::min(min_ratio, ratio);
    sum_ratio += ratio;
    ++n;
  }
  double mean = n ? sum_ratio / n : 0.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "instances=%d min_ratio=%.4f mean_ratio=%.4f", n, min_ratio,
                mean);
  return {"greedy_half_approximation", min_ratio >= 0.5 && mean >= 0.9, false,
          buf};
}

CheckResult check_lru_optimality(const VerifyOptions& opt) {
  Rng rng = Rng::substream(opt.seed, "lru");
  int failures = 0;
  double max_gap = 0.0;
  for (int trial = 0; trial < opt.lru_instances; ++trial) {
    int n = rng.next_int(4, 14);
    Weight w = 5;
    double lambda = 0.05 + 0.15 * rng.next_unit();
    Turn clock = 100;

    StoreSnapshot snap;
    snap.clock = clock;
    snap.next_node_seq = n + 1;
    RetentionInstance inst;
    inst.utility_kind = UtilityKind::RecencyDecay;
    inst.decay_lambda = lambda;
    for (int i = 0; i < n; ++i) {
      MemoryNode node;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "n%06d", i + 1);
      node.id = buf;
      node.node_type = NodeType::Episodic;
      node.type_payload = EpisodicPayload{};
      node.content = "item";
      node.content_embedding = embed_text(node.content);
      node.created_at = i;
      node.last_access = i + rng.next_int(0, static_cast<int>(clock) - i);
      node.weight = w;
      snap.nodes.push_back(node);

      RetentionItem item;
      item.id = node.id;
      item.weight = w;
      item.value = 1.0;
      item.age = static_cast<double>(clock - node.last_access);
      inst.items.push_back(item);
    }
    int keep = rng.next_int(1, n - 1);
    snap.budget = w * keep;
    Weight q = snap.budget / kNumNodeTypes;
    snap.type_budgets = {q, q, q, snap.budget - 3 * q};
    inst.budget = snap.budget;

    MemoryStore store = MemoryStore::restore(snap);
    PolicyContext ctx;
    apply_lru(store, ctx);

    double lru_utility = 0.0;
    for (const auto& id : store.live_ids()) {
      const MemoryNode& node = store.get(id);
      lru_utility +=
          std::exp(-lambda * static_cast<double>(clock - node.last_access));
    }
    double opt_utility = brute_force_optimum(inst).value;
    double gap = opt_utility - lru_utility;
    max_gap = std::max(max_gap, gap);
    if (gap > 1e-9) ++failures;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "instances=%d failures=%d max_gap=%.3e",
                opt.lru_instances, failures, max_gap);
  return {"lru_optimality_recency_decay", failures == 0, false, buf};
}

struct FuzzAggregate {
  int triggers = 0;
  int unsatisfiable = 0;
  int feasibility_failures = 0;
  int lipschitz_failures = 0;
  int counter_failures = 0;
  int determinism_failures = 0;
  double max_lipschitz_excess = -1e300;
};

FuzzAggregate run_policy_fuzz(const VerifyOptions& opt) {
  FuzzAggregate agg;
  Rng rng = Rng::substream(opt.seed, "fuzz");
  for (int trial = 0; trial < opt.fuzz_triggers; ++trial) {
    uint64_t trial_seed = rng.next_u64();
    Rng build_rng(trial_seed);
    FuzzStore fuzz = random_fuzz_store(build_rng, false);
    MemoryStore& store = fuzz.store;
    PolicyId policy = static_cast<PolicyId>(trial % kNumPolicies);

    PolicyContext ctx;
    ctx.seed = trial_seed;
    ctx.reflection.cluster_similarity_threshold = 0.8;

    std::map<std::string, Weight> weight_before;
    for (const auto& id : store.live_ids())
      weight_before[id] = store.get(id).weight;
    size_t n_before = store.live_count();
    double u_before = 0.0;
    for (const auto& id : store.live_ids()) u_before += fuzz.values[id];

    bool raised = false;
    PolicyOutcome outcome;
    try {
      outcome = apply_policy(store, policy, ctx);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetUnsatisfiable) throw;
      raised = true;
      ++agg.unsatisfiable;
    }
    ++agg.triggers;

    // Feasibility: closure and task-safety always, budget unless raised.
    std::vector<NodeId> live = store.live_ids();
    bool feasible = store.is_provenance_closed(live) && store.live_set_feasible();
    if (!raised && store.total_weight() > store.budget()) feasible = false;
    if (store.total_weight() != store.recompute_total_weight()) feasible = false;
    if (!feasible) ++agg.feasibility_failures;
    if (raised) continue;

    // Weight-Lipschitz drop audit under the modular pricing; summaries are
    // priced at the densest member's rate, which keeps max v/w unchanged.
    for (const auto& rec : outcome.summarized) {
      double rate = 0.0;
      for (const auto& m : rec.cluster)
        rate = std::max(rate, fuzz.values[m] /
                                  static_cast<double>(weight_before[m]));
      fuzz.values[rec.summary_id] =
          rate * static_cast<double>(store.get(rec.summary_id).weight);
    }
    double u_after = 0.0;
    for (const auto& id : live) u_after += fuzz.values[id];
    double drop = u_before - u_after;
    double bound = fuzz.lipschitz * static_cast<double>(outcome.freed_weight);
    agg.max_lipschitz_excess = std::max(agg.max_lipschitz_excess, drop - bound);
    if (drop > bound + 1e-9) ++agg.lipschitz_failures;

    // Complexity counters.
    int64_t k = static_cast<int64_t>(outcome.evicted.size());
    if (policy == PolicyId::Fifo || policy == PolicyId::Lru) {
      if (outcome.op_counters.nodes_touched > 2 * k + 8) ++agg.counter_failures;
    } else if (policy == PolicyId::PriorityDecay) {
      int64_t log_n = 0;
      size_t n = std::max<size_t>(n_before, 2);
      while ((size_t{1} << log_n) < n) ++log_n;
      if (outcome.op_counters.pq_ops > 4 * k * log_n + 8) ++agg.counter_failures;
    }

    // Determinism replay on a sample of trials.
    if (trial % 500 == 0) {
      Rng rebuild_rng(trial_seed);
      FuzzStore again = random_fuzz_store(rebuild_rng, false);
      PolicyOutcome second;
      bool raised2 = false;
      try {
        second = apply_policy(again.store, policy, ctx);
      } catch (const Error&) {
        raised2 = true;
      }
      if (raised != raised2 ||
          (!raised && outcome_to_json(outcome) != outcome_to_json(second)))
        ++agg.determinism_failures;
    }
  }
  return agg;
}

std::vector<CheckResult> check_policy_fuzz(const VerifyOptions& opt) {
  FuzzAggregate agg = run_policy_fuzz(opt);
  std::vector<CheckResult> out;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "triggers=%d unsatisfiable=%d max_excess=%.3e",
                agg.triggers, agg.unsatisfiable, agg.max_lipschitz_excess);
  out.push_back({"weight_lipschitz_drop_bound", agg.lipschitz_failures == 0,
                 false, buf});
  std::snprintf(buf, sizeof(buf), "failures=%d over %d triggers",
                agg.feasibility_failures, agg.triggers);
  out.push_back({"policy_feasibility_invariant", agg.feasibility_failures == 0,
                 false, buf});
  std::snprintf(buf, sizeof(buf), "failures=%d", agg.counter_failures);
  out.push_back({"complexity_counters", agg.counter_failures == 0, false, buf});
  std::snprintf(buf, sizeof(buf), "failures=%d", agg.determinism_failures);
  out.push_back({"policy_determinism", agg.determinism_failures == 0, false, buf});
  return out;
}

CheckResult check_budget_monotonicity(const VerifyOptions& opt) {
  Rng rng = Rng::substream(opt.seed, "monotone");
  std::vector<RetentionInstance> instances;
  for (int i = 0; i < opt.monotonicity_instances; ++i)
    instances.push_back(random_modular_instance(rng, 12, 3));
  MonotonicityReport rep =
      verify_budget_monotonicity(instances, {10, 20, 40, 80});
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "instances=%d monotone_viol=%d lipschitz_viol=%d "
                "greedy_info=%d max_excess=%.3e",
                rep.instances, rep.monotonicity_violations,
                rep.lipschitz_violations, rep.greedy_monotonicity_violations,
                rep.max_lipschitz_excess);
  return {"budget_monotonicity_lipschitz",
          rep.monotonicity_violations == 0 && rep.lipschitz_violations == 0,
          false, buf};
}

DpAuditInstance make_audit_instance(Rng& rng, int n) {
  DpAuditInstance inst;
  inst.lambda_priv = 0.3;
  int personal = rng.next_int(0, n - 1);
  for (int i = 0; i < n; ++i) {
    DpAuditItem item;
    item.id = item_id(i);
    item.weight = rng.next_int(1, 4);
    item.value_a = rng.next_unit() * item.weight;
    item.value_b = item.value_a;
    item.sensitivity_a = i == personal ? 0.2 + 0.8 * rng.next_unit()
                                       : rng.next_unit() * 0.5;
    item.sensitivity_b = item.sensitivity_a;
    if (i == personal) {
      item.value_b = rng.next_unit() * item.weight;
      item.sensitivity_b = 0.2 + 0.8 * rng.next_unit();
    }
    inst.items.push_back(item);
  }
  // outcomes: every subset (flat instances are all provenance-closed)
  for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
    RetentionOutcome o;
    for (int i = 0; i < n; ++i)
      if (mask & (uint32_t{1} << i)) o.ids.push_back(item_id(i));
    inst.outcomes.push_back(std::move(o));
  }
  return inst;
}

double instance_delta_q(const DpAuditInstance& inst) {
  double L = 0.0, max_w = 0.0;
  for (const auto& item : inst.items) {
    L = std::max({L, item.value_a / item.weight, item.value_b / item.weight});
    max_w = std::max(max_w, item.weight);
  }
  return delta_q_bound(L, max_w, inst.lambda_priv);
}

std::vector<CheckResult> check_dp(const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  Rng rng = Rng::substream(opt.seed, "dp");

  // Exhaustive analytic audit over adjacent 3..5 node instances.
  double worst = 0.0;
  int audited = 0;
  bool ok = true;
  for (int n = 3; n <= 5; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      DpAuditInstance inst = make_audit_instance(rng, n);
      double dq = instance_delta_q(inst);
      for (double eps : {0.5, 1.0, 2.0}) {
        DpConfig cfg;
        cfg.epsilon = eps;
        double ratio = dp_ratio_audit(inst, cfg, dq);
        worst = std::max(worst, ratio - eps);
        if (ratio > eps + 1e-9) ok = false;
        ++audited;
      }
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "audits=%d worst_excess=%.3e", audited, worst);
  out.push_back({"dp_ratio_bound", ok, false, buf});

  // Empirical distribution vs analytic softmax.
  {
    std::vector<double> q{1.0, 0.5, 0.0};
    auto probs = exp_mechanism_probabilities(q, 2.0, 1.0);
    Rng draw_rng = Rng::substream(opt.seed, "dp-draws");
    std::vector<int64_t> counts(3, 0);
    for (int i = 0; i < opt.mechanism_draws; ++i)
      counts[sample_index(probs, draw_rng)] += 1;
    double tv = 0.0;
    for (size_t i = 0; i < 3; ++i)
      tv += std::abs(static_cast<double>(counts[i]) / opt.mechanism_draws -
                     probs[i]);
    tv *= 0.5;
    std::snprintf(buf, sizeof(buf), "draws=%d tv=%.5f", opt.mechanism_draws, tv);
    out.push_back({"exp_mechanism_distribution", tv <= 0.01, false, buf});
  }

  // Large epsilon degenerates to argmax.
  {
    std::vector<double> q{1.0, 0.5, 0.0};
    auto probs = exp_mechanism_probabilities(q, 1e6, 1.0);
    Rng draw_rng = Rng::substream(opt.seed, "dp-argmax");
    int non_argmax = 0;
    for (int i = 0; i < opt.mechanism_draws; ++i)
      if (sample_index(probs, draw_rng) != 0) ++non_argmax;
    std::snprintf(buf, sizeof(buf), "non_argmax=%d of %d", non_argmax,
                  opt.mechanism_draws);
    out.push_back({"exp_mechanism_argmax_limit", non_argmax <= 5, false, buf});
  }

  if (opt.negative_controls) {
    // One personal item carrying the full swing, delta_q understated 4x:
    // the realized ratio must exceed epsilon, proving the audit has teeth.
    DpAuditInstance inst;
    inst.lambda_priv = 0.0;
    for (int i = 0; i < 3; ++i) {
      DpAuditItem item;
      item.id = item_id(i);
      item.weight = 1.0;
      item.value_a = i == 0 ? 0.0 : 0.0;
      item.value_b = i == 0 ? 1.0 : 0.0;
      item.sensitivity_a = i == 0 ? 0.5 : 0.0;
      item.sensitivity_b = i == 0 ? 0.5 : 0.0;
      inst.items.push_back(item);
    }
    for (uint32_t mask = 0; mask < 8; ++mask) {
      RetentionOutcome o;
      for (int i = 0; i < 3; ++i)
        if (mask & (uint32_t{1} << i)) o.ids.push_back(item_id(i));
      inst.outcomes.push_back(std::move(o));
    }
    DpConfig cfg;
    cfg.epsilon = 1.0;
    double understated = instance_delta_q(inst) / 4.0;
    double ratio = dp_ratio_audit(inst, cfg, understated);
    std::snprintf(buf, sizeof(buf), "ratio=%.4f epsilon=%.2f", ratio,
                  cfg.epsilon);
    out.push_back({"dp_negative_control_understated_delta_q",
                   ratio > cfg.epsilon, true, buf});
  }
  return out;
}

CheckResult check_hybrid_termination(const VerifyOptions& opt) {
  Rng rng = Rng::substream(opt.seed, "hybrid");
  int failures = 0;
  for (int trial = 0; trial < opt.adversarial_instances; ++trial) {
    Rng build_rng(rng.next_u64());
    FuzzStore fuzz = random_fuzz_store(build_rng, true);
    PolicyContext ctx;
    ctx.seed = opt.seed + static_cast<uint64_t>(trial);
    try {
      PolicyOutcome out = apply_hybrid(fuzz.store, ctx);
      if (out.phases_executed.size() > 4) ++failures;
      if (fuzz.store.total_weight() > fuzz.store.budget()) ++failures;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BudgetUnsatisfiable) ++failures;
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "instances=%d failures=%d",
                opt.adversarial_instances, failures);
  return {"hybrid_termination", failures == 0, false, buf};
}

CheckResult check_distortion_bound(const VerifyOptions& opt) {
  static const char* vocab[] = {"river", "stone", "cloud", "meadow", "ember",
                                "quartz", "willow", "falcon", "cinder", "prism"};
  Rng rng = Rng::substream(opt.seed, "distortion");
  double kappa = 1.0;
  Embedding anchor = embed_text("anchor reference phrase");
  int failures = 0;
  double worst = -1e300;
  for (int trial = 0; trial < opt.distortion_clusters; ++trial) {
    int members = rng.next_int(2, 6);
    std::vector<Embedding> embs;
    std::set<std::string> keywords;
    for (int m = 0; m < members; ++m) {
      std::string text;
      int words = rng.next_int(2, 5);
      for (int w = 0; w < words; ++w) {
        if (w) text += ' ';
        std::string tok = vocab[rng.next_below(10)];
        text += tok;
        keywords.insert(tok);
      }
      embs.push_back(embed_text(text));
    }
    std::string summary_text;
    for (const auto& k : keywords) {
      if (!summary_text.empty()) summary_text += ' ';
      summary_text += k;
    }
    Embedding summary = embed_text(summary_text);

    double d = 0.0;
    for (const auto& e : embs) d += euclidean(e, summary);
    d /= members;

    // U is kappa-Lipschitz in the member-mean embedding.
    Embedding mean = mean_embedding(embs.data(), members);
    double u_before = kappa * euclidean(mean, anchor);
    double u_after = kappa * euclidean(summary, anchor);
    double gap = std::abs(u_before - u_after) - kappa * d;
    worst = std::max(worst, gap);
    if (gap > 1e-9) ++failures;
  }
  char buf[140];
  std::snprintf(buf, sizeof(buf), "clusters=%d failures=%d worst_excess=%.3e",
                opt.distortion_clusters, failures, worst);
  return {"reflection_distortion_utility_bound", failures == 0, false, buf};
}

}  // namespace

VerificationReport run_verification(const VerifyOptions& options) {
  VerificationReport report;
  report.checks.push_back(check_greedy_approximation(options));
  report.checks.push_back(check_lru_optimality(options));
  for (auto& c : check_policy_fuzz(options)) report.checks.push_back(std::move(c));
  report.checks.push_back(check_budget_monotonicity(options));
  for (auto& c : check_dp(options)) report.checks.push_back(std::move(c));
  report.checks.push_back(check_hybrid_termination(options));
  report.checks.push_back(check_distortion_bound(options));
  return report;
}

}  // namespace mars
