#pragma once

#include <cstdint>
#include <random>

#include "qes/numerics.hpp"

namespace qes {

/// Seeded 64-bit stream: the same seed gives the same draws on every
/// platform (std::mt19937_64 is fully specified; doubles are built from the
/// top 53 bits rather than through a distribution object).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

inline constexpr std::uint64_t kDefaultSeed = 1;

/// QES_SPECTRAL_SEED if set and parseable, else kDefaultSeed.
std::uint64_t seed_from_environment();

}  // namespace qes
