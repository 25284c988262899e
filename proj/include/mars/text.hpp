#pragma once
// Small text utilities: tokenization, entity canonicalization (lowercase +
// whitespace collapse), token counting, and the FNV-1a hashes used for
// content digests and the audit hash chain.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mars {

// Lowercased alphanumeric tokens, in order of appearance.
std::vector<std::string> tokenize(std::string_view text);

// Whitespace-delimited token count, never less than 1 for non-empty text.
int token_count(std::string_view text);

// lowercase + collapse runs of whitespace to single spaces + trim.
std::string canonical_entity(std::string_view name);

uint64_t fnv1a64(std::string_view data);
uint64_t fnv1a64(uint64_t seed, std::string_view data);

// 16-hex-digit digest used wherever raw content must not appear.
std::string content_digest(std::string_view content);

}  // namespace mars
