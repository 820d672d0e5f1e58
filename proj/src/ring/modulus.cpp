// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ring/modulus.h"

#include <bit>

#include "hewflow/common/error.h"

namespace hewflow::ring {

Modulus::Modulus(uint64_t value) : value_(value) {
  if (value < 2 || value >= (uint64_t{1} << 62)) {
    throw ValidationError("modulus must lie in [2, 2^62)");
  }
  // Equals floor(2^128 / q) for odd q. For even q the estimate is off by at
  // most one, which the correction loop in reduce128 absorbs.
  const uint128_t ratio = ~uint128_t{0} / value;
  ratio_lo_ = static_cast<uint64_t>(ratio);
  ratio_hi_ = static_cast<uint64_t>(ratio >> 64);
}

int Modulus::bit_count() const { return std::bit_width(value_); }

uint64_t Modulus::pow(uint64_t base, uint64_t exponent) const {
  uint64_t result = 1 % value_;
  base %= value_;
  while (exponent > 0) {
    if (exponent & 1) {
      result = mul(result, base);
    }
    base = mul(base, base);
    exponent >>= 1;
  }
  return result;
}

uint64_t Modulus::inv(uint64_t a) const {
  if (a % value_ == 0) {
    throw ValidationError("zero has no modular inverse");
  }
  return pow(a, value_ - 2);
}

}  // namespace hewflow::ring
