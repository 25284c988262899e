#pragma once
// Pluggable set-utility models consumed by the optimizer, the DP selector
// and the verification harness. Modular and RecencyDecay are additive;
// CoverageSubmodular is weighted topic coverage (monotone submodular).

#include <map>
#include <string>
#include <vector>

namespace mars {

enum class UtilityKind { Modular, RecencyDecay, CoverageSubmodular };

class UtilityModel {
 public:
  static UtilityModel modular(std::map<std::string, double> values);
  static UtilityModel recency_decay(std::map<std::string, double> values,
                                    std::map<std::string, double> ages,
                                    double lambda);
  static UtilityModel coverage(std::map<std::string, std::vector<int>> topics,
                               std::map<int, double> topic_values);

  UtilityKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double value_of(const std::string& id) const;

  double evaluate(const std::vector<std::string>& ids) const;
  // Marginal gain of adding `id` to `base`; 0 when already a member.
  double marginal(const std::string& id,
                  const std::vector<std::string>& base) const;

  // Item-level contribution ceiling: max over items of the best-case
  // marginal (singleton value). Divides by weights at the call site.
  double max_singleton_value() const;

  void set_value(const std::string& id, double value);
  void set_age(const std::string& id, double age);
  void set_topics(const std::string& id, std::vector<int> topics);

 private:
  UtilityKind kind_ = UtilityKind::Modular;
  double lambda_ = 0.0;
  std::map<std::string, double> values_;
  std::map<std::string, double> ages_;
  std::map<std::string, std::vector<int>> topics_;
  std::map<int, double> topic_values_;
};

}  // namespace mars
