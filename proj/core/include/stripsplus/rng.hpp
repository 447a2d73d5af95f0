#pragma once

#include <cstdint>
#include <random>

namespace stripsplus {

/// Seeded generator with a fixed algorithm: std::mt19937_64, whose output
/// sequence is pinned by the standard, plus rejection sampling for bounded
/// integers (std distributions differ between library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    for (;;) {
      std::uint64_t r = eng_();
      if (r < limit) return r % n;
    }
  }

  std::uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace stripsplus
