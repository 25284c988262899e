#include "mars/text.hpp"

#include <cctype>

namespace mars {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int token_count(std::string_view text) {
  int n = 0;
  bool in_tok = false;
  for (char ch : text) {
    bool ws = std::isspace(static_cast<unsigned char>(ch)) != 0;
    if (!ws && !in_tok) ++n;
    in_tok = !ws;
  }
  return n;
}

std::string canonical_entity(std::string_view name) {
  std::string out;
  bool pending_space = false;
  for (char ch : name) {
    unsigned char c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      if (!out.empty()) pending_space = true;
    } else {
      if (pending_space) {
        out.push_back(' ');
        pending_space = false;
      }
      out.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  return out;
}

uint64_t fnv1a64(std::string_view data) {
  return fnv1a64(1469598103934665603ull, data);
}

uint64_t fnv1a64(uint64_t seed, std::string_view data) {
  uint64_t h = seed;
  for (char ch : data) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  return h;
}

std::string content_digest(std::string_view content) {
  static const char* hex = "0123456789abcdef";
  uint64_t h = fnv1a64(content);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace mars
