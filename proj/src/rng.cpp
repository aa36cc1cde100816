#include "lab/rng.hpp"

namespace lab {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// SplitMix64 finalizer (Steele, Lea & Flood 2014 / Stafford mix13).
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t streamId) noexcept
    : seed_(seed), streamId_(streamId) {
  // Mix each identifier through the full avalanche before combining so that
  // (seed, id) and (id, seed) land in unrelated states.
  state_ = mix(seed + kGamma) ^ mix(streamId * 0xBF58476D1CE4E5B9ull + 0x94D049BB133111EBull);
}

std::uint64_t RngStream::nextU64() noexcept {
  state_ += kGamma;
  return mix(state_);
}

double RngStream::nextDouble() noexcept {
  return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * nextDouble();
}

RngStream RngStream::substream(std::uint64_t childId) const noexcept {
  return RngStream(mix(seed_ ^ mix(streamId_ + kGamma)), childId);
}

}  // namespace lab
