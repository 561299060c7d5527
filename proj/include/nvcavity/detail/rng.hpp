// Copyright 2026 the nvcavity developers.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nvcavity::detail {

// All randomness in the library flows through these helpers. mt19937_64 is
// fully specified by the standard, and the uniform/normal/Poisson transforms
// below avoid the implementation-defined std::*_distribution classes, so
// fixed seeds give bit-identical streams on every platform.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1]: never zero, safe under log().
  double uniform_open() { return 1.0 - uniform(); }

  /// Standard normal via Box-Muller (cosine branch only).
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  /// Poisson sample: multiplicative inversion below lambda = 30, normal
  /// approximation with continuity correction above.
  std::uint64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 30.0) {
      const double limit = std::exp(-lambda);
      std::uint64_t k = 0;
      double product = uniform_open();
      while (product > limit) {
        ++k;
        product *= uniform_open();
      }
      return k;
    }
    const double value = std::floor(lambda + std::sqrt(lambda) * normal() + 0.5);
    return value <= 0.0 ? 0 : static_cast<std::uint64_t>(value);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace nvcavity::detail
