#include "causal/engine/rng.hpp"

namespace causal {

std::uint64_t RngStream::nextBelow(std::uint64_t n) {
  // Rejection keeps the result exactly uniform.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t x = nextU64();
    if (x >= threshold) return x % n;
  }
}

}  // namespace causal
