#pragma once

#include <cstdint>

namespace erasim {

// Counter-based random stream. Each (seed, stream) pair yields an independent
// deterministic sequence, so shots can be sampled in any order and on any
// number of workers without coordination. Core mixer is SplitMix64.
class ShotRng {
 public:
  ShotRng(uint64_t seed, uint64_t stream)
      : state_(mix(mix(seed + 0x9E3779B97F4A7C15ULL) ^
                   mix(stream + 0x632BE59BD9B4E019ULL))) {}

  explicit ShotRng(uint64_t seed) : ShotRng(seed, 0) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next_u64() % n; }

 private:
  static uint64_t mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  uint64_t state_;
};

}  // namespace erasim
