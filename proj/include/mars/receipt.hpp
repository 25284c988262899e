#pragma once
// Privacy receipts: per-user summaries of what is retained, summarized or
// evicted, with the rationales from the audit log. Content appears only as
// hashes.

#include <string>
#include <vector>

#include "mars/audit.hpp"
#include "mars/dp.hpp"
#include "mars/store.hpp"

namespace mars {

struct ReceiptEntry {
  std::string op;  // "evict" | "summarize" | "erase"
  NodeId node_id;
  Turn turn = 0;
  std::string policy;
  std::string rationale;
  std::string content_hash;
};

struct PrivacyReceipt {
  std::string user;
  int retained_count = 0;
  Weight retained_weight = 0;
  int summarized_count = 0;
  int evicted_count = 0;
  std::vector<ReceiptEntry> entries;
  AccountantSnapshot accountant;
};

// Throws UnknownUser for users the store has never seen.
PrivacyReceipt privacy_receipt(const MemoryStore& store, const AuditLog& log,
                               const std::string& user_id);

std::string receipt_to_json(const PrivacyReceipt& receipt);

}  // namespace mars
