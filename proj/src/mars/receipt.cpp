#include "mars/receipt.hpp"

#include <unordered_set>

#include "json.hpp"
#include "mars/text.hpp"

namespace mars {

using nlohmann::json;

PrivacyReceipt privacy_receipt(const MemoryStore& store, const AuditLog& log,
                               const std::string& user_id) {
  std::string user = canonical_entity(user_id);
  if (!store.knows_user(user))
    throw Error(ErrorCode::UnknownUser, "unknown user: " + user_id);

  PrivacyReceipt out;
  out.user = user;

  std::unordered_set<NodeId> attributed;
  for (const auto& id : store.live_ids()) {
    const MemoryNode& n = store.get(id);
    if (canonical_entity(n.provenance.actor) != user) continue;
    attributed.insert(id);
    out.retained_count += 1;
    out.retained_weight += n.weight;
  }
  for (const auto& [id, tomb] : store.tombstones())
    if (canonical_entity(tomb.actor) == user) attributed.insert(id);

  for (const auto& e : log.events()) {
    if (e.op != AuditOp::evict && e.op != AuditOp::summarize &&
        e.op != AuditOp::erase)
      continue;
    for (const auto& id : e.node_ids) {
      if (!attributed.count(id)) continue;
      ReceiptEntry entry;
      entry.op = audit_op_name(e.op);
      entry.node_id = id;
      entry.turn = e.turn;
      entry.policy = e.policy;
      entry.rationale = e.rationale;
      entry.content_hash = e.content_hash;
      out.entries.push_back(std::move(entry));
      if (e.op == AuditOp::evict) out.evicted_count += 1;
      if (e.op == AuditOp::summarize) out.summarized_count += 1;
    }
  }

  out.accountant = store.accountant_snapshot();
  return out;
}

std::string receipt_to_json(const PrivacyReceipt& r) {
  json j;
  j["user"] = r.user;
  j["retained"] = {{"count", r.retained_count}, {"weight", r.retained_weight}};
  j["summarized"] = r.summarized_count;
  j["evicted"] = r.evicted_count;
  j["accountant"] = {{"eps", r.accountant.eps_total},
                     {"delta", r.accountant.delta_total}};
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"op", e.op},
                           {"node", e.node_id},
                           {"turn", e.turn},
                           {"policy", e.policy},
                           {"rationale", e.rationale},
                           {"content_hash", e.content_hash}});
  }
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

}  // namespace mars
