#pragma once
// Content embeddings: deterministic hashed bag-of-words into 64 dimensions,
// L2-normalized. Reproducible everywhere, no model dependency.

#include <array>
#include <string_view>

namespace mars {

inline constexpr int kEmbeddingDim = 64;
using Embedding = std::array<double, kEmbeddingDim>;

Embedding embed_text(std::string_view text);

double dot(const Embedding& a, const Embedding& b);
double norm(const Embedding& a);
// Zero vectors have cosine 0 against everything.
double cosine(const Embedding& a, const Embedding& b);
double euclidean(const Embedding& a, const Embedding& b);

Embedding mean_embedding(const Embedding* items, int count);

}  // namespace mars
