// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/common/random.h"

#include <cmath>
#include <numbers>

namespace hewflow {

uint64_t derive_seed(uint64_t seed, uint64_t stream) {
  uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

uint64_t uniform_below(Prng& prng, uint64_t bound) {
  // Reject the top partial block so every residue is equally likely.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  uint64_t x = prng();
  while (x > limit) {
    x = prng();
  }
  return x % bound;
}

double uniform_unit(Prng& prng) {
  return static_cast<double>(prng() >> 11) * 0x1.0p-53;
}

double standard_normal(Prng& prng) {
  double u1 = uniform_unit(prng);
  while (u1 <= 0.0) {
    u1 = uniform_unit(prng);
  }
  const double u2 = uniform_unit(prng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double exponential(Prng& prng, double mean) {
  double u = uniform_unit(prng);
  while (u <= 0.0) {
    u = uniform_unit(prng);
  }
  return -mean * std::log(u);
}

}  // namespace hewflow
