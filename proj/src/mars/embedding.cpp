#include "mars/embedding.hpp"

#include <cmath>

#include "mars/text.hpp"

namespace mars {

Embedding embed_text(std::string_view text) {
  Embedding v{};
  for (const auto& tok : tokenize(text)) {
    uint64_t h = fnv1a64(tok);
    int bucket = static_cast<int>(h % kEmbeddingDim);
    double sign = ((h >> 32) & 1) ? 1.0 : -1.0;
    v[static_cast<size_t>(bucket)] += sign;
  }
  double n = norm(v);
  if (n > 0.0) {
    for (auto& x : v) x /= n;
  }
  return v;
}

double dot(const Embedding& a, const Embedding& b) {
  double s = 0.0;
  for (int i = 0; i < kEmbeddingDim; ++i) s += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)];
  return s;
}

double norm(const Embedding& a) { return std::sqrt(dot(a, a)); }

double cosine(const Embedding& a, const Embedding& b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

double euclidean(const Embedding& a, const Embedding& b) {
  double s = 0.0;
  for (int i = 0; i < kEmbeddingDim; ++i) {
    double d = a[static_cast<size_t>(i)] - b[static_cast<size_t>(i)];
    s += d * d;
  }
  return std::sqrt(s);
}

Embedding mean_embedding(const Embedding* items, int count) {
  Embedding m{};
  if (count <= 0) return m;
  for (int i = 0; i < count; ++i) {
    for (int d = 0; d < kEmbeddingDim; ++d) m[static_cast<size_t>(d)] += items[i][static_cast<size_t>(d)];
  }
  for (auto& x : m) x /= count;
  return m;
}

}  // namespace mars
