#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

#include "dng/core/error.hpp"
#include "dng/core/matrix.hpp"

namespace dng {

// SplitMix64 (Steele, Lea & Flood 2014; constants as in Vigna's reference
// implementation). Integer-only arithmetic, so a seed yields the same stream
// on every platform. Doubles are built from the top 53 bits; std::*_distribution
// is deliberately not used because its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    if (!(lo < hi)) throw InvalidInput("Rng::uniform: requires lo < hi");
    double v = lo + (hi - lo) * uniform();
    return v < hi ? v : std::nextafter(hi, lo);
  }

  // Uniform integer in [0, bound), unbiased by rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InvalidInput("Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_;
};

inline Matrix seeded_uniform(Rng& rng, double lo, double hi, std::size_t rows, std::size_t cols) {
  if (!(lo < hi)) throw InvalidInput("seeded_uniform: requires lo < hi");
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.uniform(lo, hi);
  return m;
}

}  // namespace dng
