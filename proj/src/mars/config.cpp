#include "mars/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mars/errors.hpp"
#include "mars/text.hpp"

namespace mars {

using nlohmann::json;

namespace {

json scoring_to_json(const ScoringConfig& s) {
  json j;
  json tw = json::object();
  const char* names[] = {"Episodic", "Semantic", "Social", "Task"};
  for (int t = 0; t < kNumNodeTypes; ++t)
    tw[names[t]] = s.type_weights[static_cast<size_t>(t)];
  j["type_weights"] = std::move(tw);
  j["lambda_priv"] = s.lambda_priv;
  j["lambda_age"] = s.lambda_age;
  j["imp_alpha"] = s.imp_alpha;
  j["imp_beta"] = s.imp_beta;
  j["imp_gamma"] = s.imp_gamma;
  json tp = json::object();
  for (int t = 0; t < kNumNodeTypes; ++t)
    tp[names[t]] = s.type_weight_table[static_cast<size_t>(t)];
  j["type_weight_table"] = std::move(tp);
  j["urgency_horizon"] = s.urgency_horizon;
  j["rebalance_eta"] = s.rebalance_eta;
  j["share_floor_frac"] = s.share_floor_frac;
  return j;
}

void scoring_from_json(const json& j, ScoringConfig& s) {
  const char* names[] = {"Episodic", "Semantic", "Social", "Task"};
  if (j.contains("type_weights"))
    for (int t = 0; t < kNumNodeTypes; ++t)
      if (j["type_weights"].contains(names[t]))
        s.type_weights[static_cast<size_t>(t)] =
            j["type_weights"][names[t]].get<TypeWeights>();
  s.lambda_priv = j.value("lambda_priv", s.lambda_priv);
  s.lambda_age = j.value("lambda_age", s.lambda_age);
  s.imp_alpha = j.value("imp_alpha", s.imp_alpha);
  s.imp_beta = j.value("imp_beta", s.imp_beta);
  s.imp_gamma = j.value("imp_gamma", s.imp_gamma);
  if (j.contains("type_weight_table"))
    for (int t = 0; t < kNumNodeTypes; ++t)
      if (j["type_weight_table"].contains(names[t]))
        s.type_weight_table[static_cast<size_t>(t)] =
            j["type_weight_table"][names[t]].get<double>();
  s.urgency_horizon = j.value("urgency_horizon", s.urgency_horizon);
  s.rebalance_eta = j.value("rebalance_eta", s.rebalance_eta);
  s.share_floor_frac = j.value("share_floor_frac", s.share_floor_frac);
}

}  // namespace

std::string EngineConfig::to_json() const {
  json j;
  j["scoring"] = scoring_to_json(scoring);
  j["reflection"] = {{"tau_util", reflection.tau_util},
                     {"tau_priv", reflection.tau_priv},
                     {"kappa", reflection.kappa},
                     {"max_summaries_per_trigger", reflection.max_summaries_per_trigger},
                     {"cluster_similarity_threshold", reflection.cluster_similarity_threshold},
                     {"temporal_gap_limit", reflection.temporal_gap_limit}};
  j["dp"] = {{"enabled", dp.enabled},
             {"epsilon", dp.epsilon},
             {"delta", dp.delta},
             {"tie_tolerance_frac", dp.tie_tolerance_frac},
             {"sensitivity_bound", dp.sensitivity_bound},
             {"accountant_cap", dp.accountant_cap}};
  json overrides = json::object();
  for (const auto& [ent, score] : rules.user_overrides) overrides[ent] = score;
  j["rules"] = {{"user_overrides", overrides},
                {"blacklist", std::vector<std::string>(rules.blacklist.begin(),
                                                       rules.blacklist.end())}};
  j["metrics"] = {{"nc", metrics.nc},
                  {"gcr", metrics.gcr},
                  {"sra", metrics.sra},
                  {"pp", metrics.pp},
                  {"ce", metrics.ce},
                  {"omega_nc", metrics.omega_nc},
                  {"omega_gcr", metrics.omega_gcr},
                  {"omega_sra", metrics.omega_sra},
                  {"cost_per_token", metrics.cost_per_token},
                  {"cost_per_policy_op", metrics.cost_per_policy_op},
                  {"cost_per_similarity_call", metrics.cost_per_similarity_call}};
  j["hysteresis_margin_frac"] = hysteresis_margin_frac;
  j["stale_age"] = stale_age;
  j["working_set_frac"] = working_set_frac;
  return j.dump(2) + "\n";
}

EngineConfig EngineConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  EngineConfig c;
  if (j.contains("scoring")) scoring_from_json(j["scoring"], c.scoring);
  if (j.contains("reflection")) {
    const json& r = j["reflection"];
    c.reflection.tau_util = r.value("tau_util", c.reflection.tau_util);
    c.reflection.tau_priv = r.value("tau_priv", c.reflection.tau_priv);
    c.reflection.kappa = r.value("kappa", c.reflection.kappa);
    c.reflection.max_summaries_per_trigger =
        r.value("max_summaries_per_trigger", c.reflection.max_summaries_per_trigger);
    c.reflection.cluster_similarity_threshold = r.value(
        "cluster_similarity_threshold", c.reflection.cluster_similarity_threshold);
    c.reflection.temporal_gap_limit =
        r.value("temporal_gap_limit", c.reflection.temporal_gap_limit);
  }
  if (j.contains("dp")) {
    const json& d = j["dp"];
    c.dp.enabled = d.value("enabled", c.dp.enabled);
    c.dp.epsilon = d.value("epsilon", c.dp.epsilon);
    c.dp.delta = d.value("delta", c.dp.delta);
    c.dp.tie_tolerance_frac = d.value("tie_tolerance_frac", c.dp.tie_tolerance_frac);
    c.dp.sensitivity_bound = d.value("sensitivity_bound", c.dp.sensitivity_bound);
    c.dp.accountant_cap = d.value("accountant_cap", c.dp.accountant_cap);
  }
  if (j.contains("rules")) {
    const json& r = j["rules"];
    for (auto& [ent, score] : r.value("user_overrides", json::object()).items())
      c.rules.user_overrides[ent] = score.get<double>();
    for (const auto& ent : r.value("blacklist", std::vector<std::string>{}))
      c.rules.blacklist.insert(ent);
  }
  if (j.contains("metrics")) {
    const json& m = j["metrics"];
    c.metrics.nc = m.value("nc", c.metrics.nc);
    c.metrics.gcr = m.value("gcr", c.metrics.gcr);
    c.metrics.sra = m.value("sra", c.metrics.sra);
    c.metrics.pp = m.value("pp", c.metrics.pp);
    c.metrics.ce = m.value("ce", c.metrics.ce);
    c.metrics.omega_nc = m.value("omega_nc", c.metrics.omega_nc);
    c.metrics.omega_gcr = m.value("omega_gcr", c.metrics.omega_gcr);
    c.metrics.omega_sra = m.value("omega_sra", c.metrics.omega_sra);
    c.metrics.cost_per_token = m.value("cost_per_token", c.metrics.cost_per_token);
    c.metrics.cost_per_policy_op =
        m.value("cost_per_policy_op", c.metrics.cost_per_policy_op);
    c.metrics.cost_per_similarity_call =
        m.value("cost_per_similarity_call", c.metrics.cost_per_similarity_call);
  }
  c.hysteresis_margin_frac =
      j.value("hysteresis_margin_frac", c.hysteresis_margin_frac);
  c.stale_age = j.value("stale_age", c.stale_age);
  c.working_set_frac = j.value("working_set_frac", c.working_set_frac);
  return c;
}

EngineConfig EngineConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::InvalidArgument, "cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

std::string EngineConfig::digest() const { return content_digest(to_json()); }

}  // namespace mars
