#pragma once
// Exponential-mechanism retention selection with per-user privacy accounting
// under basic composition, plus the analytic ratio audit used to verify the
// guarantee on small adjacent instances.

#include <map>
#include <string>
#include <vector>

#include "mars/audit.hpp"
#include "mars/errors.hpp"
#include "mars/rng.hpp"
#include "mars/utility.hpp"

namespace mars {

struct DpConfig {
  bool enabled = false;
  double epsilon = 1.0;
  double delta = 1e-6;              // reported only; each draw is (eps, 0)
  double tie_tolerance_frac = 0.02; // band = frac * median |density|
  double sensitivity_bound = 0.0;   // explicit cap on delta_q; 0 = derive
  double accountant_cap = 10.0;     // eps_total per user per run
};

// delta_q <= L * max_weight + lambda_priv for weight-Lipschitz utilities.
double delta_q_bound(double lipschitz, double max_weight, double lambda_priv);

class PrivacyAccountant {
 public:
  bool can_spend(const std::string& user, double eps, double cap) const;
  void spend(const std::string& user, double eps);
  AccountantSnapshot total(const std::string& user) const;
  AccountantSnapshot grand_total() const;
  const std::map<std::string, AccountantSnapshot>& per_user() const {
    return totals_;
  }

 private:
  std::map<std::string, AccountantSnapshot> totals_;
};

// One retained-set outcome offered to the selector.
struct RetentionOutcome {
  std::vector<std::string> ids;
};

struct ExpMechResult {
  size_t index = 0;
  double q = 0.0;
};

// q(S) = U(S) - lambda_priv * sum of member sensitivities.
double outcome_score(const RetentionOutcome& outcome, const UtilityModel& utility,
                     const std::map<std::string, double>& sensitivities,
                     double lambda_priv);

// Samples index i with probability proportional to exp(eps*q_i/(2*delta_q)),
// via stable log-sum-exp. Charges (eps, 0) to the user's accountant; throws
// PrivacyBudgetExhausted when that would exceed the cap (callers fall back
// to argmax and say so in the audit).
ExpMechResult exp_mechanism_select(
    const std::vector<RetentionOutcome>& candidates, const UtilityModel& utility,
    const std::map<std::string, double>& sensitivities, double lambda_priv,
    const DpConfig& config, double delta_q, PrivacyAccountant& accountant,
    const std::string& user, Rng& rng);

// Low-level helpers shared with the audit.
std::vector<double> exp_mechanism_probabilities(const std::vector<double>& scores,
                                                double epsilon, double delta_q);
size_t sample_index(const std::vector<double>& probabilities, Rng& rng);

// Adjacent-instance audit: same outcome space, one personal node's value or
// sensitivity differing between the two stores.
struct DpAuditItem {
  std::string id;
  double value_a = 0.0;
  double value_b = 0.0;
  double sensitivity_a = 0.0;
  double sensitivity_b = 0.0;
  double weight = 1.0;
};

struct DpAuditInstance {
  std::vector<DpAuditItem> items;
  std::vector<RetentionOutcome> outcomes;
  double lambda_priv = 0.0;
};

// Max |ln(P_a[o]/P_b[o])| over outcomes, computed analytically. Throws
// NotAdjacent when more than one item differs or the differing item carries
// no sensitivity on either side.
double dp_ratio_audit(const DpAuditInstance& instance, const DpConfig& config,
                      double delta_q);

}  // namespace mars
