#include "mars/dp.hpp"

#include <algorithm>
#include <cmath>

namespace mars {

double delta_q_bound(double lipschitz, double max_weight, double lambda_priv) {
  return lipschitz * max_weight + lambda_priv;
}

bool PrivacyAccountant::can_spend(const std::string& user, double eps,
                                  double cap) const {
  auto it = totals_.find(user);
  double cur = it == totals_.end() ? 0.0 : it->second.eps_total;
  return cur + eps <= cap + 1e-12;
}

void PrivacyAccountant::spend(const std::string& user, double eps) {
  totals_[user].eps_total += eps;
}

AccountantSnapshot PrivacyAccountant::total(const std::string& user) const {
  auto it = totals_.find(user);
  return it == totals_.end() ? AccountantSnapshot{} : it->second;
}

AccountantSnapshot PrivacyAccountant::grand_total() const {
  AccountantSnapshot sum;
  for (const auto& [user, t] : totals_) {
    sum.eps_total += t.eps_total;
    sum.delta_total += t.delta_total;
  }
  return sum;
}

double outcome_score(const RetentionOutcome& outcome, const UtilityModel& utility,
                     const std::map<std::string, double>& sensitivities,
                     double lambda_priv) {
  double u = utility.evaluate(outcome.ids);
  double s = 0.0;
  for (const auto& id : outcome.ids) {
    auto it = sensitivities.find(id);
    if (it != sensitivities.end()) s += it->second;
  }
  return u - lambda_priv * s;
}

std::vector<double> exp_mechanism_probabilities(const std::vector<double>& scores,
                                                double epsilon, double delta_q) {
  if (scores.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidates");
  if (delta_q <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "delta_q must be positive");
  std::vector<double> logits(scores.size());
  double max_logit = -1e300;
  for (size_t i = 0; i < scores.size(); ++i) {
    logits[i] = epsilon * scores[i] / (2.0 * delta_q);
    max_logit = std::max(max_logit, logits[i]);
  }
  double z = 0.0;
  for (double& l : logits) {
    l = std::exp(l - max_logit);
    z += l;
  }
  for (double& l : logits) l /= z;
  return logits;
}

size_t sample_index(const std::vector<double>& probabilities, Rng& rng) {
  double u = rng.next_unit();
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    if (u < acc) return i;
  }
  return probabilities.size() - 1;
}

ExpMechResult exp_mechanism_select(
    const std::vector<RetentionOutcome>& candidates, const UtilityModel& utility,
    const std::map<std::string, double>& sensitivities, double lambda_priv,
    const DpConfig& config, double delta_q, PrivacyAccountant& accountant,
    const std::string& user, Rng& rng) {
  if (candidates.empty())
    throw Error(ErrorCode::EmptyCandidates, "no candidate sets");
  if (!accountant.can_spend(user, config.epsilon, config.accountant_cap))
    throw Error(ErrorCode::PrivacyBudgetExhausted,
                "privacy budget exhausted for " + user);

  std::vector<double> scores(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i)
    scores[i] = outcome_score(candidates[i], utility, sensitivities, lambda_priv);
  auto probs = exp_mechanism_probabilities(scores, config.epsilon, delta_q);
  size_t pick = sample_index(probs, rng);
  accountant.spend(user, config.epsilon);
  return {pick, scores[pick]};
}

double dp_ratio_audit(const DpAuditInstance& instance, const DpConfig& config,
                      double delta_q) {
  int differing = 0;
  bool personal = false;
  for (const auto& item : instance.items) {
    bool diff = item.value_a != item.value_b ||
                item.sensitivity_a != item.sensitivity_b;
    if (diff) {
      ++differing;
      personal = item.sensitivity_a > 0.0 || item.sensitivity_b > 0.0;
    }
  }
  if (differing > 1 || (differing == 1 && !personal))
    throw Error(ErrorCode::NotAdjacent,
                "stores are not adjacent in one personal node");

  std::map<std::string, double> values_a, values_b, sens_a, sens_b;
  for (const auto& item : instance.items) {
    values_a[item.id] = item.value_a;
    values_b[item.id] = item.value_b;
    sens_a[item.id] = item.sensitivity_a;
    sens_b[item.id] = item.sensitivity_b;
  }
  UtilityModel model_a = UtilityModel::modular(values_a);
  UtilityModel model_b = UtilityModel::modular(values_b);

  std::vector<double> qa(instance.outcomes.size()), qb(instance.outcomes.size());
  for (size_t i = 0; i < instance.outcomes.size(); ++i) {
    qa[i] = outcome_score(instance.outcomes[i], model_a, sens_a,
                          instance.lambda_priv);
    qb[i] = outcome_score(instance.outcomes[i], model_b, sens_b,
                          instance.lambda_priv);
  }
  auto pa = exp_mechanism_probabilities(qa, config.epsilon, delta_q);
  auto pb = exp_mechanism_probabilities(qb, config.epsilon, delta_q);
  double worst = 0.0;
  for (size_t i = 0; i < pa.size(); ++i)
    worst = std::max(worst, std::abs(std::log(pa[i]) - std::log(pb[i])));
  return worst;
}

}  // namespace mars
