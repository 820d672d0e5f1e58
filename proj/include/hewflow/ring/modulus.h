// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace hewflow::ring {

using uint128_t = unsigned __int128;

/// A word-size modulus q < 2^62 with Barrett constants for 128-bit reduction.
class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(uint64_t value);

  uint64_t value() const { return value_; }
  int bit_count() const;

  /// x mod q for an arbitrary 64-bit x.
  uint64_t reduce(uint64_t x) const { return x % value_; }

  /// x mod q for x < q^2 (any product of two residues).
  uint64_t reduce128(uint128_t x) const {
    const uint64_t lo = static_cast<uint64_t>(x);
    const uint64_t hi = static_cast<uint64_t>(x >> 64);
    const uint128_t carry = (static_cast<uint128_t>(lo) * ratio_lo_) >> 64;
    const uint128_t mid1 = static_cast<uint128_t>(lo) * ratio_hi_ + carry;
    const uint128_t mid2 =
        static_cast<uint128_t>(hi) * ratio_lo_ + static_cast<uint64_t>(mid1);
    const uint64_t quotient = hi * ratio_hi_ + static_cast<uint64_t>(mid1 >> 64) +
                              static_cast<uint64_t>(mid2 >> 64);
    uint64_t r = lo - quotient * value_;
    while (r >= value_) {
      r -= value_;
    }
    return r;
  }

  /// Reduction of an arbitrary 128-bit value (used for lazy accumulators that
  /// may exceed q^2).
  uint64_t reduce_wide(uint128_t x) const {
    const uint64_t hi = static_cast<uint64_t>(x >> 64);
    if (hi < value_) {
      return reduce128(x);
    }
    const uint128_t folded =
        (static_cast<uint128_t>(hi % value_) << 64) | static_cast<uint64_t>(x);
    return reduce128(folded);
  }

  uint64_t add(uint64_t a, uint64_t b) const {
    const uint64_t s = a + b;
    return s >= value_ ? s - value_ : s;
  }
  uint64_t sub(uint64_t a, uint64_t b) const {
    return a >= b ? a - b : a + value_ - b;
  }
  uint64_t neg(uint64_t a) const { return a == 0 ? 0 : value_ - a; }
  uint64_t mul(uint64_t a, uint64_t b) const {
    return reduce128(static_cast<uint128_t>(a) * b);
  }
  uint64_t pow(uint64_t base, uint64_t exponent) const;
  /// Inverse modulo a prime q (Fermat). Throws on zero.
  uint64_t inv(uint64_t a) const;

  /// Shoup companion floor(w * 2^64 / q) for a fixed multiplicand w < q.
  uint64_t shoup(uint64_t w) const {
    return static_cast<uint64_t>((static_cast<uint128_t>(w) << 64) / value_);
  }
  /// x * w mod q using the precomputed Shoup companion of w; x < 2^64.
  uint64_t mul_shoup(uint64_t x, uint64_t w, uint64_t w_shoup) const {
    const uint64_t q_est =
        static_cast<uint64_t>((static_cast<uint128_t>(x) * w_shoup) >> 64);
    const uint64_t r = x * w - q_est * value_;
    return r >= value_ ? r - value_ : r;
  }
  /// As mul_shoup but the result lies in [0, 2q).
  uint64_t mul_shoup_lazy(uint64_t x, uint64_t w, uint64_t w_shoup) const {
    const uint64_t q_est =
        static_cast<uint64_t>((static_cast<uint128_t>(x) * w_shoup) >> 64);
    return x * w - q_est * value_;
  }

  /// Maps a signed integer into [0, q).
  uint64_t from_signed(int64_t x) const {
    if (x >= 0) {
      return static_cast<uint64_t>(x) % value_;
    }
    const uint64_t m = static_cast<uint64_t>(-(x + 1)) % value_;
    return value_ - 1 - m;
  }
  /// Centered lift of a residue into (-q/2, q/2].
  int64_t to_centered(uint64_t r) const {
    return r > (value_ >> 1) ? -static_cast<int64_t>(value_ - r)
                             : static_cast<int64_t>(r);
  }

  friend bool operator==(const Modulus& a, const Modulus& b) {
    return a.value_ == b.value_;
  }

 private:
  uint64_t value_ = 0;
  uint64_t ratio_hi_ = 0;
  uint64_t ratio_lo_ = 0;
};

}  // namespace hewflow::ring
