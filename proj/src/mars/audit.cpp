#include "mars/audit.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "mars/store.hpp"
#include "mars/text.hpp"

namespace mars {

using nlohmann::json;

const char* audit_op_name(AuditOp op) {
  switch (op) {
    case AuditOp::insert: return "insert";
    case AuditOp::evict: return "evict";
    case AuditOp::summarize: return "summarize";
    case AuditOp::access: return "access";
    case AuditOp::erase: return "erase";
    case AuditOp::policy_trigger: return "policy_trigger";
  }
  return "insert";
}

std::optional<AuditOp> audit_op_from_name(const std::string& name) {
  if (name == "insert") return AuditOp::insert;
  if (name == "evict") return AuditOp::evict;
  if (name == "summarize") return AuditOp::summarize;
  if (name == "access") return AuditOp::access;
  if (name == "erase") return AuditOp::erase;
  if (name == "policy_trigger") return AuditOp::policy_trigger;
  return std::nullopt;
}

std::string rationale(const std::string& op,
                      const std::vector<RationaleFactor>& factors) {
  if (factors.empty()) return op;
  std::vector<size_t> order(factors.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return std::abs(factors[a].magnitude) > std::abs(factors[b].magnitude);
  });
  std::string out = op + " due to " + factors[order[0]].label;
  if (order.size() > 1) out += " and " + factors[order[1]].label;
  return out;
}

namespace {

json features_to_json(const FeatureVector& f) {
  return json{{"recency", f.recency},
              {"frequency", f.frequency},
              {"goal_similarity", f.goal_similarity},
              {"centrality", f.centrality},
              {"novelty", f.novelty},
              {"urgency", f.urgency}};
}

FeatureVector features_from_json(const json& j) {
  FeatureVector f;
  f.recency = j.value("recency", 0.0);
  f.frequency = j.value("frequency", 0.0);
  f.goal_similarity = j.value("goal_similarity", 0.0);
  f.centrality = j.value("centrality", 0.0);
  f.novelty = j.value("novelty", 0.0);
  f.urgency = j.value("urgency", 0.0);
  return f;
}

json event_to_json(const AuditEvent& e, bool with_chain) {
  json j;
  j["seq"] = e.seq;
  j["turn"] = e.turn;
  j["op"] = audit_op_name(e.op);
  j["node_ids"] = e.node_ids;
  j["policy"] = e.policy;
  j["params_digest"] = e.params_digest;
  if (e.features) j["features"] = features_to_json(*e.features);
  if (e.score) j["score"] = *e.score;
  j["content_hash"] = e.content_hash;
  j["rationale"] = e.rationale;
  j["budget_before"] = e.budget_before;
  j["budget_after"] = e.budget_after;
  j["accountant"] = {{"eps", e.privacy_accountant.eps_total},
                     {"delta", e.privacy_accountant.delta_total}};
  if (with_chain) j["chain"] = e.chain_hash;
  return j;
}

}  // namespace

int64_t AuditLog::record(AuditEvent event) {
  event.seq = static_cast<int64_t>(events_.size()) + 1;
  std::string body = event_to_json(event, false).dump();
  event.chain_hash = content_digest(last_hash_ + body);
  last_hash_ = event.chain_hash;
  events_.push_back(std::move(event));
  return events_.back().seq;
}

std::string AuditLog::to_jsonl() const {
  std::string out;
  for (const auto& e : events_) {
    out += event_to_json(e, true).dump();
    out += '\n';
  }
  return out;
}

AuditLog AuditLog::from_jsonl(const std::string& text) {
  AuditLog log;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    AuditEvent e;
    e.seq = j.at("seq").get<int64_t>();
    e.turn = j.at("turn").get<Turn>();
    auto op = audit_op_from_name(j.at("op").get<std::string>());
    if (!op) throw Error(ErrorCode::MalformedDocument, "unknown audit op");
    e.op = *op;
    e.node_ids = j.at("node_ids").get<std::vector<NodeId>>();
    e.policy = j.value("policy", "");
    e.params_digest = j.value("params_digest", "");
    if (j.contains("features")) e.features = features_from_json(j["features"]);
    if (j.contains("score")) e.score = j["score"].get<double>();
    e.content_hash = j.value("content_hash", "");
    e.rationale = j.value("rationale", "");
    e.budget_before = j.value("budget_before", Weight{0});
    e.budget_after = j.value("budget_after", Weight{0});
    if (j.contains("accountant")) {
      e.privacy_accountant.eps_total = j["accountant"].value("eps", 0.0);
      e.privacy_accountant.delta_total = j["accountant"].value("delta", 0.0);
    }
    e.chain_hash = j.value("chain", "");
    log.events_.push_back(std::move(e));
    log.last_hash_ = log.events_.back().chain_hash;
  }
  return log;
}

Explanation explain(const AuditLog& log, const MemoryStore& store,
                    const NodeId& id) {
  Explanation out;
  out.node_id = id;
  out.live = store.contains(id);

  bool seen = out.live;
  for (const auto& e : log.events()) {
    if (std::find(e.node_ids.begin(), e.node_ids.end(), id) ==
        e.node_ids.end())
      continue;
    seen = true;
    out.history.push_back(
        {e.seq, e.turn, audit_op_name(e.op), e.policy, e.rationale});
    if (!e.content_hash.empty() && out.content_hash.empty())
      out.content_hash = e.content_hash;
  }
  const auto& tombs = store.tombstones();
  if (!seen && tombs.count(id) == 0)
    throw Error(ErrorCode::NeverSeen, "id never seen: " + id);

  if (out.live) out.content_hash = content_digest(store.get(id).content);

  // Walk the first-declared parent chain, through tombstones when needed.
  NodeId cur = id;
  std::unordered_set<NodeId> guard;
  while (!cur.empty() && guard.insert(cur).second) {
    out.provenance_chain.push_back(cur);
    const std::vector<NodeId>* parents = nullptr;
    if (const MemoryNode* n = store.find(cur)) {
      parents = &n->provenance.parents;
    } else if (auto it = tombs.find(cur); it != tombs.end()) {
      parents = &it->second.parents;
    }
    if (!parents || parents->empty()) break;
    cur = parents->front();
  }
  return out;
}

}  // namespace mars
