#pragma once

// Counter-based reproducible random numbers: every sample index gets its own
// stream, so results do not depend on evaluation order.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace symplab {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() {
    const double u = 1.0 - uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * uniform());
  }

 private:
  std::uint64_t state_;
};

/// Independent stream for sample `index` of the run seeded with `seed`.
inline SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 mix(seed ^ 0xD1B54A32D192ED03ULL);
  const std::uint64_t base = mix();
  return SplitMix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

}  // namespace symplab
