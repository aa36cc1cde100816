#pragma once
// Deterministic, splittable random streams.
//
// A stream is identified by (seed, streamId) and produces the same sequence
// on every platform, run, and thread count.  The generator is SplitMix64 over
// a state derived by avalanche-mixing the two identifiers, which keeps
// nearby (seed, streamId) pairs statistically unrelated.  Simulation code
// gives every agent its own stream so aggregation order cannot matter.

#include <cstdint>

namespace lab {

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t streamId) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t streamId() const noexcept { return streamId_; }

  std::uint64_t nextU64() noexcept;

  // Uniform on [0, 1) with 53 random mantissa bits.
  double nextDouble() noexcept;

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;

  bool bernoulli(double p) noexcept { return nextDouble() < p; }

  // Independent child stream; children of distinct ids never collide with
  // each other or with the parent.
  RngStream substream(std::uint64_t childId) const noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t streamId_;
  std::uint64_t state_;
};

}  // namespace lab
