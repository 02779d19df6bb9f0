#pragma once

#include <cstdint>

namespace causal {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed of the `index`-th independent sub-stream of `base` (Monte Carlo
// trials, analyzer samples, histogram runs).
constexpr std::uint64_t deriveSeed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index + 0x632BE59BD9B4E019ULL));
}

// Counter-based deterministic stream: draw k is mix64(seed + (k+1)*gamma),
// which is exactly the SplitMix64 sequence seeded with `seed`. Streams are
// bit-identical on every platform.
class RngStream {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t nextU64() {
    ++counter_;
    return mix64(seed_ + counter_ * kGamma);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double nextDouble() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  // Uniform on the closed interval [0, 1].
  double nextClosed() {
    return static_cast<double>(nextU64() >> 11) / static_cast<double>((1ULL << 53) - 1);
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t nextBelow(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace causal
