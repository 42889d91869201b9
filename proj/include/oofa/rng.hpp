#pragma once

#include <cmath>
#include <cstdint>

namespace oofa {

/**
 * Seedable 64-bit generator used everywhere randomness is needed.
 *
 * Core step is SplitMix64 (Steele, Lea & Flood; the java.util.SplitableRandom
 * finalizer), chosen because the whole state is one word, so substreams can be
 * derived by XOR-ing an index into the seed without correlation between
 * streams. All derived quantities are fixed transforms of the 64-bit stream:
 *   - doubles take the top 53 bits,
 *   - bounded integers use rejection sampling,
 *   - normals use Box-Muller on two uniforms (pair cached).
 * Results are reproducible bit-for-bit for a given seed on one platform.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Independent stream for a worker; same convention for restarts and reps.
  Rng substream(std::uint64_t index) const { return Rng(seed_ ^ index); }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased (rejection sampling).
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace oofa
