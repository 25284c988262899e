#include "mars/utility.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mars {

UtilityModel UtilityModel::modular(std::map<std::string, double> values) {
  UtilityModel m;
  m.kind_ = UtilityKind::Modular;
  m.values_ = std::move(values);
  return m;
}

UtilityModel UtilityModel::recency_decay(std::map<std::string, double> values,
                                         std::map<std::string, double> ages,
                                         double lambda) {
  UtilityModel m;
  m.kind_ = UtilityKind::RecencyDecay;
  m.values_ = std::move(values);
  m.ages_ = std::move(ages);
  m.lambda_ = lambda;
  return m;
}

UtilityModel UtilityModel::coverage(
    std::map<std::string, std::vector<int>> topics,
    std::map<int, double> topic_values) {
  UtilityModel m;
  m.kind_ = UtilityKind::CoverageSubmodular;
  m.topics_ = std::move(topics);
  m.topic_values_ = std::move(topic_values);
  return m;
}

double UtilityModel::value_of(const std::string& id) const {
  auto it = values_.find(id);
  return it == values_.end() ? 0.0 : it->second;
}

void UtilityModel::set_value(const std::string& id, double value) {
  values_[id] = value;
}

void UtilityModel::set_age(const std::string& id, double age) {
  ages_[id] = age;
}

void UtilityModel::set_topics(const std::string& id, std::vector<int> topics) {
  topics_[id] = std::move(topics);
}

double UtilityModel::evaluate(const std::vector<std::string>& ids) const {
  switch (kind_) {
    case UtilityKind::Modular: {
      double u = 0.0;
      for (const auto& id : ids) u += value_of(id);
      return u;
    }
    case UtilityKind::RecencyDecay: {
      double u = 0.0;
      for (const auto& id : ids) {
        auto it = ages_.find(id);
        double age = it == ages_.end() ? 0.0 : it->second;
        u += value_of(id) * std::exp(-lambda_ * age);
      }
      return u;
    }
    case UtilityKind::CoverageSubmodular: {
      std::set<int> covered;
      for (const auto& id : ids) {
        auto it = topics_.find(id);
        if (it == topics_.end()) continue;
        covered.insert(it->second.begin(), it->second.end());
      }
      double u = 0.0;
      for (int t : covered) {
        auto it = topic_values_.find(t);
        if (it != topic_values_.end()) u += it->second;
      }
      return u;
    }
  }
  return 0.0;
}

double UtilityModel::marginal(const std::string& id,
                              const std::vector<std::string>& base) const {
  if (std::find(base.begin(), base.end(), id) != base.end()) return 0.0;
  if (kind_ != UtilityKind::CoverageSubmodular) {
    std::vector<std::string> one{id};
    return evaluate(one);
  }
  std::set<int> covered;
  for (const auto& b : base) {
    auto it = topics_.find(b);
    if (it == topics_.end()) continue;
    covered.insert(it->second.begin(), it->second.end());
  }
  double gain = 0.0;
  auto it = topics_.find(id);
  if (it == topics_.end()) return 0.0;
  for (int t : it->second) {
    if (covered.count(t)) continue;
    auto tv = topic_values_.find(t);
    if (tv != topic_values_.end()) gain += tv->second;
  }
  return gain;
}

double UtilityModel::max_singleton_value() const {
  double best = 0.0;
  if (kind_ == UtilityKind::CoverageSubmodular) {
    for (const auto& [id, ts] : topics_) {
      std::vector<std::string> one{id};
      best = std::max(best, evaluate(one));
    }
  } else {
    for (const auto& [id, v] : values_) {
      std::vector<std::string> one{id};
      best = std::max(best, evaluate(one));
    }
  }
  return best;
}

}  // namespace mars
