// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hewflow::ring {

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(uint64_t value);

/// The `count` largest primes q < 2^bits with q = 1 (mod 2n), descending.
/// Candidates are scanned as k*2n + 1.
std::vector<uint64_t> primes_below(size_t n, int bits, size_t count,
                                   const std::vector<uint64_t>& exclude = {});

/// The `count` primes q = 1 (mod 2n) closest to 2^bits, alternating above and
/// below so that consecutive rescales keep the running scale near 2^bits.
std::vector<uint64_t> primes_near(size_t n, int bits, size_t count,
                                  const std::vector<uint64_t>& exclude = {});

/// An element of exact multiplicative order 2n modulo q (requires q = 1 mod 2n).
uint64_t primitive_root_2n(uint64_t q, size_t n);

}  // namespace hewflow::ring
