// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "hewflow/ring/modulus.h"

namespace hewflow::ring {

/// Negacyclic NTT tables for one prime. Twiddles are stored in bit-reversed
/// order together with their Shoup companions.
struct NttTables {
  uint64_t psi = 0;
  std::vector<uint64_t> psi_rev;
  std::vector<uint64_t> psi_rev_shoup;
  std::vector<uint64_t> psi_inv_rev;
  std::vector<uint64_t> psi_inv_rev_shoup;
  uint64_t n_inv = 0;
  uint64_t n_inv_shoup = 0;
};

/// Ring degree plus an ordered RNS basis. Immutable once built; share through
/// shared_ptr<const RingParams>.
class RingParams {
 public:
  /// Validates the basis and precomputes NTT tables. Throws ValidationError.
  static std::shared_ptr<const RingParams> create(size_t n,
                                                  std::vector<uint64_t> primes);

  size_t n() const { return n_; }
  int log_n() const { return log_n_; }
  size_t limb_count() const { return moduli_.size(); }
  const std::vector<Modulus>& moduli() const { return moduli_; }
  const Modulus& modulus(size_t limb) const { return moduli_.at(limb); }
  const NttTables& tables(size_t limb) const { return tables_.at(limb); }
  std::vector<uint64_t> primes() const;

  /// In-place transforms of one limb. The forward output is in bit-reversed
  /// evaluation order: slot k holds p(psi^(2*bitrev(k)+1)).
  void forward(uint64_t* values, size_t limb) const;
  void inverse(uint64_t* values, size_t limb) const;

 private:
  RingParams() = default;

  size_t n_ = 0;
  int log_n_ = 0;
  std::vector<Modulus> moduli_;
  std::vector<NttTables> tables_;
};

size_t bit_reverse(size_t value, int bits);

}  // namespace hewflow::ring
