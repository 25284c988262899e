#pragma once
// Deterministic RNG with named sub-streams. std::uniform_*_distribution is
// implementation-defined, so bounded draws are implemented here directly to
// keep artifacts byte-identical across toolchains.

#include <cstdint>
#include <random>
#include <string_view>

#include "mars/text.hpp"

namespace mars {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Sub-stream for an independent component, e.g. substream(seed, "policy").
  static Rng substream(uint64_t seed, std::string_view name) {
    return Rng(fnv1a64(seed, name));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n) by rejection sampling; unbiased and portable.
  uint64_t next_below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  int next_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(next_below(static_cast<uint64_t>(hi - lo + 1)));
  }

  double next_unit() {  // [0, 1) with 53 bits
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  template <typename It>
  void shuffle(It first, It last) {
    auto n = static_cast<uint64_t>(last - first);
    for (uint64_t i = n; i > 1; --i) {
      uint64_t j = next_below(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mars
