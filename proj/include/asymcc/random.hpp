#pragma once

#include <cstdint>
#include <random>

namespace asymcc {

/// Derives independent child seeds from a base seed, so that parallel trials
/// and generator calls can each run their own engine without overlap.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  // SplitMix64 finalizer applied to base + stream * golden gamma.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable 64-bit generator with helpers that do not depend on
/// implementation-defined distribution internals, so runs are reproducible
/// for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t bits() { return eng_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased uniform integer in [0, n), rejection-free in the common case.
  std::uint64_t below(std::uint64_t n) {
    // Lemire's multiply-shift with a single correction loop.
    std::uint64_t x = eng_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t floor = (0 - n) % n;
      while (lo < floor) {
        x = eng_();
        m = static_cast<__uint128_t>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  int index(std::size_t n) { return static_cast<int>(below(n)); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace asymcc
