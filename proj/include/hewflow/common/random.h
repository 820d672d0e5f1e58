// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace hewflow {

/// Deterministic 64-bit generator. std::mt19937_64 output is fixed by the
/// standard, so streams are reproducible across platforms; the distribution
/// helpers below avoid the implementation-defined std:: distributions.
using Prng = std::mt19937_64;

/// Derives an independent sub-seed for stream `stream` of `seed` (splitmix64).
uint64_t derive_seed(uint64_t seed, uint64_t stream);

/// Uniform integer in [0, bound) by rejection; bound > 0.
uint64_t uniform_below(Prng& prng, uint64_t bound);

/// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Prng& prng);

/// Standard normal deviate (Box-Muller on uniform_unit).
double standard_normal(Prng& prng);

/// Exponential deviate with the given mean.
double exponential(Prng& prng, double mean);

}  // namespace hewflow
