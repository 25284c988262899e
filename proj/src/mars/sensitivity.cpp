#include "mars/sensitivity.hpp"

#include <algorithm>

#include "mars/text.hpp"

namespace mars {

namespace {

constexpr const char* kMask = "[redacted]";

SurfacePattern make_pattern(std::string name, std::string category,
                            std::string pattern, double base) {
  SurfacePattern p;
  p.name = std::move(name);
  p.category = std::move(category);
  p.pattern = std::move(pattern);
  p.base_score = base;
  p.re = std::regex(p.pattern, std::regex::ECMAScript);
  return p;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

SensitivityRuleSet SensitivityRuleSet::defaults() {
  SensitivityRuleSet r;
  r.surface_patterns.push_back(make_pattern(
      "email", "contact", R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})",
      0.6));
  r.surface_patterns.push_back(make_pattern(
      "phone", "contact", R"(\+?\d[\d -]{7,14}\d)", 0.7));
  r.surface_patterns.push_back(make_pattern(
      "id-number", "identifier", R"(\b[A-Z]{2}\d{6,10}\b)", 0.8));
  r.keyword_lists.push_back(
      {"health",
       {"diagnosis", "medication", "therapy", "illness", "allergy", "surgery"},
       0.5});
  r.keyword_lists.push_back(
      {"finance",
       {"salary", "debt", "bankruptcy", "loan", "credit", "mortgage"},
       0.5});
  r.keyword_lists.push_back(
      {"protected-attribute",
       {"religion", "ethnicity", "disability", "pregnancy", "union"},
       0.6});
  r.type_prior = {0.0, 0.0, 0.1, 0.0};  // social memories start riskier
  return r;
}

double sensitivity_score(const std::string& content, NodeType node_type,
                         const Provenance& provenance,
                         const SensitivityRuleSet& rules) {
  std::string actor = canonical_entity(provenance.actor);
  if (!actor.empty()) {
    if (rules.blacklist.count(actor)) return 1.0;
    auto ov = rules.user_overrides.find(actor);
    if (ov != rules.user_overrides.end()) return clamp01(ov->second);
  }
  // Overrides also fire when the entity is named in the content.
  std::string canon = canonical_entity(content);
  for (const auto& ent : rules.blacklist)
    if (!ent.empty() && canon.find(ent) != std::string::npos) return 1.0;
  for (const auto& [ent, forced] : rules.user_overrides)
    if (!ent.empty() && canon.find(ent) != std::string::npos)
      return clamp01(forced);

  double base = 0.0;
  for (const auto& p : rules.surface_patterns)
    if (std::regex_search(content, p.re)) base = std::max(base, p.base_score);
  auto tokens = tokenize(content);
  std::set<std::string> token_set(tokens.begin(), tokens.end());
  for (const auto& kl : rules.keyword_lists)
    for (const auto& w : kl.words)
      if (token_set.count(w)) base = std::max(base, kl.base_score);

  if (base == 0.0 && rules.type_prior_for(node_type) == 0.0) return 0.0;
  return clamp01(base + rules.type_prior_for(node_type));
}

RedactionResult redact_output(const std::string& text,
                              const SensitivityRuleSet& rules,
                              RedactionMode mode) {
  RedactionResult out;
  out.text = text;
  for (const auto& p : rules.surface_patterns) {
    std::string next;
    auto begin = std::sregex_iterator(out.text.begin(), out.text.end(), p.re);
    auto end = std::sregex_iterator();
    size_t last = 0;
    for (auto it = begin; it != end; ++it) {
      next += out.text.substr(last, static_cast<size_t>(it->position()) - last);
      next += kMask;
      last = static_cast<size_t>(it->position() + it->length());
      out.flags.push_back({"pattern", p.name, p.category});
    }
    if (last > 0) {
      next += out.text.substr(last);
      out.text = std::move(next);
    }
  }

  double threshold = mode == RedactionMode::Strict ? 0.25 : 0.5;
  auto tokens = tokenize(out.text);
  std::set<std::string> token_set(tokens.begin(), tokens.end());
  for (const auto& kl : rules.keyword_lists) {
    if (kl.base_score < threshold) continue;
    for (const auto& w : kl.words)
      if (token_set.count(w)) out.flags.push_back({"keyword", w, kl.category});
  }
  return out;
}

int count_sensitive_tokens(const std::string& text,
                           const SensitivityRuleSet& rules) {
  int n = 0;
  for (const auto& p : rules.surface_patterns) {
    auto begin = std::sregex_iterator(text.begin(), text.end(), p.re);
    n += static_cast<int>(std::distance(begin, std::sregex_iterator()));
  }
  for (const auto& tok : tokenize(text))
    for (const auto& kl : rules.keyword_lists)
      if (kl.words.count(tok)) ++n;
  return n;
}

}  // namespace mars
