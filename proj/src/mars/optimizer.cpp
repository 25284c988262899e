#include "mars/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "mars/errors.hpp"

namespace mars {

using nlohmann::json;

UtilityModel RetentionInstance::build_model() const {
  switch (utility_kind) {
    case UtilityKind::Modular: {
      std::map<std::string, double> values;
      for (const auto& it : items) values[it.id] = it.value;
      return UtilityModel::modular(std::move(values));
    }
    case UtilityKind::RecencyDecay: {
      std::map<std::string, double> values, ages;
      for (const auto& it : items) {
        values[it.id] = it.value;
        ages[it.id] = it.age;
      }
      return UtilityModel::recency_decay(std::move(values), std::move(ages),
                                         decay_lambda);
    }
    case UtilityKind::CoverageSubmodular: {
      std::map<std::string, std::vector<int>> topics;
      for (const auto& it : items) topics[it.id] = it.topics;
      return UtilityModel::coverage(std::move(topics), topic_values);
    }
  }
  return UtilityModel::modular({});
}

double RetentionInstance::lipschitz_constant() const {
  UtilityModel model = build_model();
  double L = 0.0;
  for (const auto& it : items) {
    std::vector<std::string> one{it.id};
    L = std::max(L, model.evaluate(one) / static_cast<double>(it.weight));
  }
  return L;
}

std::string instance_to_json(const RetentionInstance& inst) {
  json j;
  j["budget"] = inst.budget;
  switch (inst.utility_kind) {
    case UtilityKind::Modular: j["utility"] = "modular"; break;
    case UtilityKind::RecencyDecay: j["utility"] = "recency_decay"; break;
    case UtilityKind::CoverageSubmodular: j["utility"] = "coverage"; break;
  }
  j["decay_lambda"] = inst.decay_lambda;
  json tv = json::object();
  for (const auto& [t, v] : inst.topic_values) tv[std::to_string(t)] = v;
  j["topic_values"] = std::move(tv);
  json items = json::array();
  for (const auto& it : inst.items) {
    json ij;
    ij["id"] = it.id;
    ij["weight"] = it.weight;
    ij["value"] = it.value;
    ij["age"] = it.age;
    ij["topics"] = it.topics;
    ij["sensitivity"] = it.sensitivity;
    if (it.parent) ij["parent"] = *it.parent;
    items.push_back(std::move(ij));
  }
  j["items"] = std::move(items);
  return j.dump(2) + "\n";
}

RetentionInstance instance_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  RetentionInstance inst;
  inst.budget = j.at("budget").get<Weight>();
  std::string kind = j.value("utility", "modular");
  if (kind == "modular") inst.utility_kind = UtilityKind::Modular;
  else if (kind == "recency_decay") inst.utility_kind = UtilityKind::RecencyDecay;
  else if (kind == "coverage") inst.utility_kind = UtilityKind::CoverageSubmodular;
  else throw Error(ErrorCode::MalformedDocument, "unknown utility kind");
  inst.decay_lambda = j.value("decay_lambda", 0.1);
  for (auto& [k, v] : j.value("topic_values", json::object()).items())
    inst.topic_values[std::stoi(k)] = v.get<double>();
  for (const json& ij : j.value("items", json::array())) {
    RetentionItem it;
    it.id = ij.at("id").get<std::string>();
    it.weight = ij.value("weight", Weight{1});
    it.value = ij.value("value", 0.0);
    it.age = ij.value("age", 0.0);
    it.topics = ij.value("topics", std::vector<int>{});
    it.sensitivity = ij.value("sensitivity", 0.0);
    if (ij.contains("parent")) it.parent = ij["parent"].get<std::string>();
    inst.items.push_back(std::move(it));
  }
  return inst;
}

namespace {

// Index-space view with parent pointers resolved, items in id-sorted order
// so mask enumeration tie-breaks lexicographically for free.
struct IndexedInstance {
  std::vector<const RetentionItem*> items;  // sorted by id
  std::vector<int> parent;                  // -1 for roots
  std::vector<double> eff_value;            // modular-equivalent when additive
  std::vector<uint64_t> topic_mask;
  std::vector<double> topic_weight_by_bit;
  bool additive = false;

  explicit IndexedInstance(const RetentionInstance& inst) {
    for (const auto& it : inst.items) items.push_back(&it);
    std::sort(items.begin(), items.end(),
              [](const RetentionItem* a, const RetentionItem* b) {
                return a->id < b->id;
              });
    std::unordered_map<std::string, int> pos;
    for (int i = 0; i < static_cast<int>(items.size()); ++i)
      pos[items[static_cast<size_t>(i)]->id] = i;
    parent.assign(items.size(), -1);
    for (int i = 0; i < static_cast<int>(items.size()); ++i) {
      const auto& p = items[static_cast<size_t>(i)]->parent;
      if (p) {
        auto it = pos.find(*p);
        if (it == pos.end())
          throw Error(ErrorCode::DanglingReference, "unknown parent: " + *p);
        parent[static_cast<size_t>(i)] = it->second;
      }
    }
    additive = inst.utility_kind != UtilityKind::CoverageSubmodular;
    eff_value.assign(items.size(), 0.0);
    topic_mask.assign(items.size(), 0);
    if (additive) {
      for (size_t i = 0; i < items.size(); ++i) {
        double v = items[i]->value;
        if (inst.utility_kind == UtilityKind::RecencyDecay)
          v *= std::exp(-inst.decay_lambda * items[i]->age);
        eff_value[i] = v;
      }
    } else {
      std::map<int, int> bit_of;
      for (const auto& [t, v] : inst.topic_values) {
        int b = static_cast<int>(bit_of.size());
        bit_of[t] = b;
        topic_weight_by_bit.push_back(v);
      }
      for (size_t i = 0; i < items.size(); ++i) {
        for (int t : items[i]->topics) {
          auto it = bit_of.find(t);
          if (it == bit_of.end()) {
            int b = static_cast<int>(bit_of.size());
            if (b >= 64)
              throw Error(ErrorCode::TooLarge, "more than 64 topics");
            bit_of[t] = b;
            topic_weight_by_bit.push_back(0.0);
            it = bit_of.find(t);
          }
          topic_mask[i] |= uint64_t{1} << it->second;
        }
      }
    }
  }

  double coverage_value(uint64_t covered) const {
    double v = 0.0;
    while (covered) {
      int b = std::countr_zero(covered);
      v += topic_weight_by_bit[static_cast<size_t>(b)];
      covered &= covered - 1;
    }
    return v;
  }
};

// Lexicographic order of the id-sorted member sequences encoded as masks.
bool mask_lex_less(uint32_t a, uint32_t b) {
  uint32_t diff = a ^ b;
  if (diff == 0) return false;
  int bit = std::countr_zero(diff);
  uint32_t above = ~((uint32_t{1} << bit) | ((uint32_t{1} << bit) - 1));
  if (a & (uint32_t{1} << bit)) return (b & above) != 0;
  return (a & above) == 0;
}

}  // namespace

Optimum brute_force_optimum(const RetentionInstance& inst) {
  int n = static_cast<int>(inst.items.size());
  if (n > 20) throw Error(ErrorCode::TooLarge, "brute force capped at 20 items");
  IndexedInstance ix(inst);

  size_t count = size_t{1} << n;
  std::vector<Weight> weight(count, 0);
  std::vector<uint32_t> parents_mask(count, 0);
  std::vector<double> value(count, 0.0);
  std::vector<uint64_t> covered(count, 0);

  double best = 0.0;
  uint32_t best_mask = 0;
  for (uint32_t mask = 1; mask < count; ++mask) {
    uint32_t low = mask & (~mask + 1);
    int i = std::countr_zero(mask);
    uint32_t rest = mask ^ low;
    weight[mask] = weight[rest] + ix.items[static_cast<size_t>(i)]->weight;
    uint32_t pm = parents_mask[rest];
    if (ix.parent[static_cast<size_t>(i)] >= 0)
      pm |= uint32_t{1} << ix.parent[static_cast<size_t>(i)];
    parents_mask[mask] = pm;
    if (ix.additive) {
      value[mask] = value[rest] + ix.eff_value[static_cast<size_t>(i)];
    } else {
      covered[mask] = covered[rest] | ix.topic_mask[static_cast<size_t>(i)];
    }
    if (weight[mask] > inst.budget) continue;
    if ((pm & ~mask) != 0) continue;  // not provenance-closed
    double v = ix.additive ? value[mask] : ix.coverage_value(covered[mask]);
    if (v > best + 1e-12) {
      best = v;
      best_mask = mask;
    } else if (std::abs(v - best) <= 1e-12 && best_mask != 0 &&
               mask_lex_less(mask, best_mask)) {
      best = v;
      best_mask = mask;
    }
  }

  Optimum out;
  out.value = best;
  for (int i = 0; i < n; ++i)
    if (best_mask & (uint32_t{1} << i))
      out.ids.push_back(ix.items[static_cast<size_t>(i)]->id);
  return out;
}

std::vector<std::string> greedy_density(const RetentionInstance& inst) {
  IndexedInstance ix(inst);
  UtilityModel model = inst.build_model();
  int n = static_cast<int>(ix.items.size());
  std::vector<bool> in_set(static_cast<size_t>(n), false);
  std::vector<std::string> chosen;
  Weight used = 0;

  while (true) {
    int pick = -1;
    double best_ratio = -1e300;
    for (int i = 0; i < n; ++i) {
      if (in_set[static_cast<size_t>(i)]) continue;
      int p = ix.parent[static_cast<size_t>(i)];
      if (p >= 0 && !in_set[static_cast<size_t>(p)]) continue;  // accessibility
      const RetentionItem* item = ix.items[static_cast<size_t>(i)];
      if (used + item->weight > inst.budget) continue;
      double gain = model.marginal(item->id, chosen);
      double ratio = gain / static_cast<double>(item->weight);
      if (pick < 0 || ratio > best_ratio + 1e-15 ||
          (std::abs(ratio - best_ratio) <= 1e-15 &&
           (item->weight < ix.items[static_cast<size_t>(pick)]->weight ||
            (item->weight == ix.items[static_cast<size_t>(pick)]->weight &&
             item->id < ix.items[static_cast<size_t>(pick)]->id)))) {
        pick = i;
        best_ratio = ratio;
      }
    }
    if (pick < 0) break;
    in_set[static_cast<size_t>(pick)] = true;
    chosen.push_back(ix.items[static_cast<size_t>(pick)]->id);
    used += ix.items[static_cast<size_t>(pick)]->weight;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::string> best_of_greedy_and_singleton(
    const RetentionInstance& inst) {
  UtilityModel model = inst.build_model();
  std::vector<std::string> greedy = greedy_density(inst);
  double greedy_value = model.evaluate(greedy);

  std::unordered_map<std::string, const RetentionItem*> by_id;
  for (const auto& it : inst.items) by_id[it.id] = &it;

  std::vector<std::string> best_closure;
  double best_value = -1e300;
  for (const auto& it : inst.items) {
    std::vector<std::string> closure;
    Weight w = 0;
    const RetentionItem* cur = &it;
    bool ok = true;
    while (true) {
      closure.push_back(cur->id);
      w += cur->weight;
      if (!cur->parent) break;
      auto pi = by_id.find(*cur->parent);
      if (pi == by_id.end()) {
        ok = false;
        break;
      }
      cur = pi->second;
    }
    if (!ok || w > inst.budget) continue;
    std::sort(closure.begin(), closure.end());
    double v = model.evaluate(closure);
    if (v > best_value + 1e-15 ||
        (std::abs(v - best_value) <= 1e-15 && closure < best_closure)) {
      best_value = v;
      best_closure = closure;
    }
  }

  if (best_value > greedy_value + 1e-15) return best_closure;
  return greedy;
}

StreamTrace online_greedy_with_eviction(const std::vector<RetentionItem>& arrivals,
                                        Weight budget, UtilityKind kind,
                                        double decay_lambda,
                                        const std::map<int, double>& topic_values,
                                        int prefix_cap) {
  StreamTrace trace;
  RetentionInstance prefix;
  prefix.budget = budget;
  prefix.utility_kind = kind;
  prefix.decay_lambda = decay_lambda;
  prefix.topic_values = topic_values;

  UtilityModel model = prefix.build_model();
  std::vector<RetentionItem> retained;

  auto total_weight = [](const std::vector<RetentionItem>& xs) {
    Weight w = 0;
    for (const auto& x : xs) w += x.weight;
    return w;
  };
  auto ids_of = [](const std::vector<RetentionItem>& xs) {
    std::vector<std::string> ids;
    for (const auto& x : xs) ids.push_back(x.id);
    return ids;
  };

  double regret_sum = 0.0;
  for (const auto& arrival : arrivals) {
    prefix.items.push_back(arrival);
    model = prefix.build_model();

    bool parent_ok = true;
    if (arrival.parent) {
      parent_ok = false;
      for (const auto& r : retained)
        if (r.id == *arrival.parent) parent_ok = true;
    }

    std::vector<RetentionItem> keep_branch = retained;
    bool keep_feasible = parent_ok && arrival.weight <= budget;
    int keep_evictions = 0;
    if (keep_feasible) {
      keep_branch.push_back(arrival);
      while (total_weight(keep_branch) > budget) {
        // removable = members (not the arrival) with no dependent in branch
        int pick = -1;
        double best_ratio = 1e300;
        for (int i = 0; i < static_cast<int>(keep_branch.size()) - 1; ++i) {
          const auto& cand = keep_branch[static_cast<size_t>(i)];
          bool has_dep = false;
          for (const auto& other : keep_branch)
            if (other.parent && *other.parent == cand.id) has_dep = true;
          if (has_dep) continue;
          std::vector<std::string> without;
          for (const auto& other : keep_branch)
            if (other.id != cand.id) without.push_back(other.id);
          double gain = model.marginal(cand.id, without);
          double ratio = gain / static_cast<double>(cand.weight);
          if (pick < 0 || ratio < best_ratio - 1e-15 ||
              (std::abs(ratio - best_ratio) <= 1e-15 &&
               (cand.weight < keep_branch[static_cast<size_t>(pick)].weight ||
                (cand.weight == keep_branch[static_cast<size_t>(pick)].weight &&
                 cand.id < keep_branch[static_cast<size_t>(pick)].id)))) {
            pick = i;
            best_ratio = ratio;
          }
        }
        if (pick < 0) {
          keep_feasible = false;
          break;
        }
        keep_branch.erase(keep_branch.begin() + pick);
        ++keep_evictions;
      }
    }

    double u_keep = keep_feasible ? model.evaluate(ids_of(keep_branch)) : -1e300;
    double u_reject = model.evaluate(ids_of(retained));
    bool accept = keep_feasible && u_keep >= u_reject;
    if (accept) {
      retained = keep_branch;
      trace.evictions += keep_evictions;
    }

    StreamStep step;
    step.accepted = accept;
    step.retained = ids_of(retained);
    std::sort(step.retained.begin(), step.retained.end());
    step.utility = model.evaluate(step.retained);
    if (static_cast<int>(prefix.items.size()) <= prefix_cap) {
      step.exact = true;
      step.regret = brute_force_optimum(prefix).value - step.utility;
    } else {
      step.exact = false;
      auto approx = best_of_greedy_and_singleton(prefix);
      step.regret = model.evaluate(approx) - step.utility;
    }
    regret_sum += step.regret;
    trace.steps.push_back(std::move(step));
  }
  trace.mean_regret =
      trace.steps.empty() ? 0.0 : regret_sum / static_cast<double>(trace.steps.size());
  return trace;
}

MonotonicityReport verify_budget_monotonicity(
    const std::vector<RetentionInstance>& instances,
    const std::vector<Weight>& budget_ladder) {
  MonotonicityReport report;
  report.instances = static_cast<int>(instances.size());
  report.budgets = static_cast<int>(budget_ladder.size());
  for (const auto& base : instances) {
    double L = base.lipschitz_constant();
    double prev_opt = -1.0;
    double prev_greedy = -1.0;
    Weight prev_budget = 0;
    UtilityModel model = base.build_model();
    for (Weight b : budget_ladder) {
      RetentionInstance inst = base;
      inst.budget = b;
      double opt = brute_force_optimum(inst).value;
      double greedy = model.evaluate(greedy_density(inst));
      if (prev_opt >= 0.0) {
        if (opt < prev_opt - 1e-9) report.monotonicity_violations += 1;
        double bound = L * static_cast<double>(b - prev_budget);
        double excess = std::abs(opt - prev_opt) - bound;
        if (excess > 1e-9) report.lipschitz_violations += 1;
        report.max_lipschitz_excess =
            std::max(report.max_lipschitz_excess, excess);
        if (greedy < prev_greedy - 1e-9)
          report.greedy_monotonicity_violations += 1;
      }
      prev_opt = opt;
      prev_greedy = greedy;
      prev_budget = b;
    }
  }
  return report;
}

}  // namespace mars
