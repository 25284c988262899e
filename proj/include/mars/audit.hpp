#pragma once
// Append-only audit log. Every store mutation lands here with a rationale and
// a hash chain for tamper evidence; raw content never appears, only digests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mars/node.hpp"
#include "mars/scoring.hpp"

namespace mars {

enum class AuditOp { insert, evict, summarize, access, erase, policy_trigger };

const char* audit_op_name(AuditOp op);
std::optional<AuditOp> audit_op_from_name(const std::string& name);

struct AccountantSnapshot {
  double eps_total = 0.0;
  double delta_total = 0.0;
};

struct AuditEvent {
  int64_t seq = 0;  // assigned by the log, strictly increasing from 1
  Turn turn = 0;
  AuditOp op = AuditOp::insert;
  std::vector<NodeId> node_ids;
  std::string policy;         // empty when no policy was in effect
  std::string params_digest;  // digest of the active configuration
  std::optional<FeatureVector> features;
  std::optional<double> score;  // density or other decision key
  std::string content_hash;
  std::string rationale;
  Weight budget_before = 0;  // total store weight before the mutation
  Weight budget_after = 0;
  AccountantSnapshot privacy_accountant;
  std::string chain_hash;  // hash of (previous chain_hash, this event)
};

// Weighted factor feeding a rationale sentence. The label is already
// directional ("high sensitivity", "low importance", ...).
struct RationaleFactor {
  std::string label;
  double magnitude = 0.0;
};

// "<op> due to <top factor> and <second factor>"; stable under re-runs.
std::string rationale(const std::string& op,
                      const std::vector<RationaleFactor>& factors);

class AuditLog {
 public:
  // Assigns seq and the chain hash; everything else must be filled in.
  int64_t record(AuditEvent event);

  const std::vector<AuditEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }
  size_t size() const { return events_.size(); }

  std::string to_jsonl() const;
  static AuditLog from_jsonl(const std::string& text);

 private:
  std::vector<AuditEvent> events_;
  std::string last_hash_ = "0000000000000000";
};

struct ExplainEntry {
  int64_t seq = 0;
  Turn turn = 0;
  std::string op;
  std::string policy;
  std::string rationale;
};

struct Explanation {
  NodeId node_id;
  bool live = false;
  std::string content_hash;
  std::vector<ExplainEntry> history;
  std::vector<NodeId> provenance_chain;  // node, parent, grandparent, ...
};

class MemoryStore;
// Full event history plus provenance chain (tombstoned ancestors included).
Explanation explain(const AuditLog& log, const MemoryStore& store,
                    const NodeId& id);

}  // namespace mars
