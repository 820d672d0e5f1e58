// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hewflow/ring/rns_poly.h"

namespace hewflow::ckks {

using ring::Domain;
using ring::RingParamsPtr;
using ring::RnsPoly;

using ParamsHash = std::array<uint8_t, 32>;

std::string to_hex(const ParamsHash& hash);
ParamsHash hash_from_hex(const std::string& hex);

/// Scheme configuration. Cheap to copy: the ring is shared.
struct SchemeParams {
  RingParamsPtr ring;
  double scale = 0.0;
  double sigma = 3.2;
  int relin_digit_bits = 31;
  ParamsHash hash{};

  size_t n() const { return ring->n(); }
  size_t slot_count() const { return ring->n() / 2; }
  size_t max_level() const { return ring->limb_count(); }
  uint64_t prime(size_t limb) const { return ring->modulus(limb).value(); }
  /// log2 of the product of the first `level` primes.
  double log2_modulus(size_t level) const;

  /// Validates and fingerprints. Throws ValidationError when:
  /// fewer than 2 limbs, scale not a power of two, scale^2 >= q0 * q_min,
  /// or sigma <= 0.
  static SchemeParams create(size_t n, std::vector<uint64_t> primes,
                             double scale, double sigma = 3.2,
                             int relin_digit_bits = 31);

  /// n = 2048, primes of about 40/30/30 bits, scale 2^30.
  static SchemeParams desk_default();
  /// A 40-bit base prime followed by `depth` primes closest to 2^scale_bits,
  /// so that `depth` rescales are available.
  static SchemeParams with_depth(size_t n, size_t depth, int scale_bits = 30);
};

/// SHA-256 over a canonical byte encoding of every field that affects
/// ciphertext compatibility.
ParamsHash compute_params_hash(size_t n, const std::vector<uint64_t>& primes,
                               double scale, double sigma, int digit_bits);

}  // namespace hewflow::ckks
