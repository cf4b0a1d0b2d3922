#pragma once

#include <cstdint>

namespace qspec {

/// Counter-based generator: output i is a SplitMix64 finalizer applied to
/// key + i * golden. Streams are derived with split(), which hashes the key
/// together with a stream id, so every consumer gets an independent sequence
/// and results do not depend on call order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  Rng split(std::uint64_t stream) const noexcept {
    Rng child(0);
    child.key_ = mix(key_ ^ mix(stream + 0x9e3779b97f4a7c15ULL));
    return child;
  }

  std::uint64_t next_u64() noexcept { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller (one variate per call, the cosine branch).
  double normal() noexcept;

  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qspec
