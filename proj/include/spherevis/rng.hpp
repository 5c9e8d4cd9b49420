// Copyright (c) 2026 The spherevis Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SPHEREVIS_RNG_HPP
#define SPHEREVIS_RNG_HPP

#include <cstdint>

namespace spherevis {

// SplitMix64 (Steele, Lea & Flood, "Fast Splittable Pseudorandom Number
// Generators", OOPSLA 2014).  Pure 64-bit integer arithmetic plus an exact
// uint64 -> double conversion, so every stream is bit-identical across
// platforms and compilers.  Output k of a stream is a pure function of
// (seed, k), which lets samplers be partitioned across threads and still
// merge to the single-threaded result.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t next() { return mix(state_ += kGamma); }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Uniform in {0, ..., n-1}.  Modulo bias is below 2^-60 for small n.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  /// Value at position k of the stream, independent of the current state.
  static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t k) {
    return mix(seed + (k + 1) * kGamma);
  }

  /// Decorrelated seed for substream `stream` of `seed`.  Fixed convention so
  /// per-object sample streams are reproducible across runs and platforms.
  static constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix(seed ^ mix(0xD1B54A32D192ED03ull + stream));
  }

  /// Exact double conversion used everywhere a counter word becomes a uniform.
  static constexpr double to_unit_double(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace spherevis

#endif  // SPHEREVIS_RNG_HPP
