// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hewflow/ckks/params.h"

namespace hewflow::ckks {

/// Ternary secret, NTT domain, all limbs.
struct SecretKey {
  RnsPoly s;
  ParamsHash params_hash{};
};

/// (b, a) with b = -a*s + e, NTT domain, all limbs.
struct PublicKey {
  RnsPoly b;
  RnsPoly a;
  ParamsHash params_hash{};
};

/// One gadget digit: limb `limb`, bits [shift, shift + digit_bits).
struct RelinDigit {
  size_t limb = 0;
  int shift = 0;
};

/// Digit list implied by the params: each prime is split into
/// ceil(bits(q_i) / relin_digit_bits) digits, limb-major.
std::vector<RelinDigit> relin_digits(const SchemeParams& params);

/// Key-switching material for s^2 -> s. Entry d encrypts s^2 * 2^shift_d in
/// limb limb_d and zero in every other limb.
struct RelinKey {
  std::vector<RnsPoly> b;
  std::vector<RnsPoly> a;
  ParamsHash params_hash{};

  size_t digit_count() const { return b.size(); }
};

struct KeySet {
  SecretKey secret;
  PublicKey public_key;
  RelinKey relin;
};

/// Deterministic under `seed`.
KeySet keygen(const SchemeParams& params, uint64_t seed);

}  // namespace hewflow::ckks
