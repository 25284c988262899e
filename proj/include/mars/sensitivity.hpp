#pragma once
// Rule-based sensitivity scoring and two-pass output redaction. The pattern
// library is fixed and versioned with the repo; no learned classifiers, so
// every score is reproducible.

#include <map>
#include <regex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mars/node.hpp"
#include "mars/scoring.hpp"

namespace mars {

struct SurfacePattern {
  std::string name;      // "email", "phone", ...
  std::string category;  // "identifier", "contact", ...
  std::string pattern;   // regex source, kept for config echo
  double base_score = 0.5;
  std::regex re;
};

struct KeywordList {
  std::string category;  // "health", "finance", "protected-attribute"
  std::set<std::string> words;
  double base_score = 0.5;
};

struct SensitivityRuleSet {
  std::vector<SurfacePattern> surface_patterns;
  std::vector<KeywordList> keyword_lists;
  std::array<double, kNumNodeTypes> type_prior{};  // additive offsets
  std::map<std::string, double> user_overrides;    // entity -> forced score
  std::set<std::string> blacklist;                 // entity -> never retain

  double type_prior_for(NodeType t) const {
    return type_prior[static_cast<size_t>(t)];
  }

  static SensitivityRuleSet defaults();
};

// max(matched base scores) + type prior, clamped to [0,1]; a user override
// on the attributed entity wins outright.
double sensitivity_score(const std::string& content, NodeType node_type,
                         const Provenance& provenance,
                         const SensitivityRuleSet& rules);

enum class RedactionMode { Standard, Strict };

struct RedactionFlag {
  std::string kind;      // "pattern" or "keyword"
  std::string name;      // pattern name or keyword
  std::string category;
};

struct RedactionResult {
  std::string text;
  std::vector<RedactionFlag> flags;
};

// Pass 1 masks surface-pattern spans; pass 2 flags keyword hits at or above
// the mode threshold. Idempotent: masked text re-redacts to itself.
RedactionResult redact_output(const std::string& text,
                              const SensitivityRuleSet& rules,
                              RedactionMode mode);

// Sensitive tokens still present in (already emitted) text: keyword hits
// plus any unmasked pattern spans. Drives the leakage metric.
int count_sensitive_tokens(const std::string& text,
                           const SensitivityRuleSet& rules);

}  // namespace mars
