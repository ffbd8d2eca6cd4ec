#pragma once

// Counter-based random streams. A stream is identified by (seed, su, trial);
// draw i of a stream is a pure function of those four integers, so Monte
// Carlo runs give identical results regardless of how trials are scheduled.

#include <cstdint>

namespace clustersense {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t su, std::uint64_t trial)
      : key_(mix64(mix64(mix64(seed) ^ (su * 0x9e3779b97f4a7c15ULL + 1)) ^
                   (trial * 0xd1b54a32d192ed03ULL + 2))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix64(key_ + counter_);
  }

  /// Uniform in (0, 1], 53-bit resolution.
  double uniform_open0() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal variate (128-layer ziggurat).
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace clustersense
