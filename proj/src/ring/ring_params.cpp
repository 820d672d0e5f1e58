// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ring/ring_params.h"

#include <algorithm>
#include <bit>
#include <string>

#include "hewflow/common/error.h"
#include "hewflow/ring/primes.h"

namespace hewflow::ring {

size_t bit_reverse(size_t value, int bits) {
  size_t r = 0;
  for (int i = 0; i < bits; ++i) {
    r = (r << 1) | ((value >> i) & 1);
  }
  return r;
}

std::shared_ptr<const RingParams> RingParams::create(
    size_t n, std::vector<uint64_t> primes) {
  if (n < 8 || !std::has_single_bit(n)) {
    throw ValidationError("ring degree must be a power of two >= 8");
  }
  if (primes.empty()) {
    throw ValidationError("RNS basis is empty");
  }
  auto params = std::shared_ptr<RingParams>(new RingParams());
  params->n_ = n;
  params->log_n_ = std::countr_zero(n);
  for (size_t i = 0; i < primes.size(); ++i) {
    const uint64_t q = primes[i];
    if (q >= (uint64_t{1} << 62) || !is_prime(q)) {
      throw ValidationError("limb " + std::to_string(q) +
                            " is not a prime below 2^62");
    }
    if (q % (2 * n) != 1) {
      throw ValidationError("limb " + std::to_string(q) + " is not 1 mod 2n");
    }
    if (std::count(primes.begin(), primes.end(), q) != 1) {
      throw ValidationError("duplicate limb " + std::to_string(q));
    }
    const Modulus mod(q);
    NttTables t;
    t.psi = primitive_root_2n(q, n);
    const uint64_t psi_inv = mod.inv(t.psi);
    t.psi_rev.resize(n);
    t.psi_inv_rev.resize(n);
    uint64_t power = 1;
    uint64_t power_inv = 1;
    for (size_t k = 0; k < n; ++k) {
      const size_t r = bit_reverse(k, params->log_n_);
      t.psi_rev[r] = power;
      t.psi_inv_rev[r] = power_inv;
      power = mod.mul(power, t.psi);
      power_inv = mod.mul(power_inv, psi_inv);
    }
    t.psi_rev_shoup.resize(n);
    t.psi_inv_rev_shoup.resize(n);
    for (size_t k = 0; k < n; ++k) {
      t.psi_rev_shoup[k] = mod.shoup(t.psi_rev[k]);
      t.psi_inv_rev_shoup[k] = mod.shoup(t.psi_inv_rev[k]);
    }
    t.n_inv = mod.inv(n % q);
    t.n_inv_shoup = mod.shoup(t.n_inv);
    params->moduli_.push_back(mod);
    params->tables_.push_back(std::move(t));
  }
  return params;
}

std::vector<uint64_t> RingParams::primes() const {
  std::vector<uint64_t> out;
  out.reserve(moduli_.size());
  for (const auto& m : moduli_) {
    out.push_back(m.value());
  }
  return out;
}

void RingParams::forward(uint64_t* a, size_t limb) const {
  const Modulus& mod = moduli_[limb];
  const NttTables& tab = tables_[limb];
  // Lazy butterflies keep values in [0, 4q); q < 2^62 rules out overflow.
  const uint64_t q = mod.value();
  const uint64_t two_q = 2 * q;
  size_t t = n_;
  for (size_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (size_t i = 0; i < m; ++i) {
      const size_t j1 = 2 * i * t;
      const uint64_t w = tab.psi_rev[m + i];
      const uint64_t ws = tab.psi_rev_shoup[m + i];
      for (size_t j = j1; j < j1 + t; ++j) {
        uint64_t u = a[j];
        u -= u >= two_q ? two_q : 0;
        const uint64_t v = mod.mul_shoup_lazy(a[j + t], w, ws);
        a[j] = u + v;
        a[j + t] = u + two_q - v;
      }
    }
  }
  for (size_t j = 0; j < n_; ++j) {
    uint64_t x = a[j];
    x -= x >= two_q ? two_q : 0;
    a[j] = x >= q ? x - q : x;
  }
}

void RingParams::inverse(uint64_t* a, size_t limb) const {
  const Modulus& mod = moduli_[limb];
  const NttTables& tab = tables_[limb];
  // Lazy butterflies keep values in [0, 2q).
  const uint64_t two_q = 2 * mod.value();
  size_t t = 1;
  for (size_t m = n_; m > 1; m >>= 1) {
    const size_t h = m >> 1;
    size_t j1 = 0;
    for (size_t i = 0; i < h; ++i) {
      const uint64_t w = tab.psi_inv_rev[h + i];
      const uint64_t ws = tab.psi_inv_rev_shoup[h + i];
      for (size_t j = j1; j < j1 + t; ++j) {
        const uint64_t u = a[j];
        const uint64_t v = a[j + t];
        const uint64_t sum = u + v;
        a[j] = sum >= two_q ? sum - two_q : sum;
        a[j + t] = mod.mul_shoup_lazy(u + two_q - v, w, ws);
      }
      j1 += 2 * t;
    }
    t <<= 1;
  }
  for (size_t j = 0; j < n_; ++j) {
    a[j] = mod.mul_shoup(a[j], tab.n_inv, tab.n_inv_shoup);
  }
}

}  // namespace hewflow::ring
