// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ring/primes.h"

#include <algorithm>

#include "hewflow/common/error.h"
#include "hewflow/ring/modulus.h"

namespace hewflow::ring {
namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<uint128_t>(a) * b % m);
}

uint64_t powmod(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  base %= m;
  while (e) {
    if (e & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    e >>= 1;
  }
  return r;
}

bool contains(const std::vector<uint64_t>& v, uint64_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                     29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<uint64_t> primes_below(size_t n, int bits, size_t count,
                                   const std::vector<uint64_t>& exclude) {
  if (bits < 2 || bits > 61) {
    throw ValidationError("prime size must be in [2, 61] bits");
  }
  const uint64_t step = 2 * static_cast<uint64_t>(n);
  std::vector<uint64_t> result;
  uint64_t k = ((uint64_t{1} << bits) - 2) / step;
  for (; k > 0 && result.size() < count; --k) {
    const uint64_t candidate = k * step + 1;
    if (is_prime(candidate) && !contains(exclude, candidate)) {
      result.push_back(candidate);
    }
  }
  if (result.size() < count) {
    throw ValidationError("not enough NTT-friendly primes below 2^" +
                          std::to_string(bits));
  }
  return result;
}

std::vector<uint64_t> primes_near(size_t n, int bits, size_t count,
                                  const std::vector<uint64_t>& exclude) {
  const uint64_t step = 2 * static_cast<uint64_t>(n);
  const uint64_t center = uint64_t{1} << bits;
  uint64_t down = (center - 1) / step;  // k*step + 1 < center
  uint64_t up = down + 1;
  std::vector<uint64_t> result;
  bool take_below = true;
  while (result.size() < count) {
    uint64_t* cursor = take_below ? &down : &up;
    while (true) {
      if (*cursor == 0) {
        throw ValidationError("prime search exhausted");
      }
      const uint64_t candidate = *cursor * step + 1;
      if (take_below) --*cursor; else ++*cursor;
      if (is_prime(candidate) && !contains(exclude, candidate) &&
          !contains(result, candidate)) {
        result.push_back(candidate);
        break;
      }
    }
    take_below = !take_below;
  }
  return result;
}

uint64_t primitive_root_2n(uint64_t q, size_t n) {
  const uint64_t order = 2 * static_cast<uint64_t>(n);
  if ((q - 1) % order != 0) {
    throw ValidationError("q is not 1 mod 2n");
  }
  // psi = g^((q-1)/2n) has order dividing 2n; it is exact iff psi^n = -1.
  for (uint64_t g = 2; g < q; ++g) {
    const uint64_t psi = powmod(g, (q - 1) / order, q);
    if (powmod(psi, n, q) == q - 1) {
      return psi;
    }
  }
  throw ValidationError("no primitive 2n-th root of unity");
}

}  // namespace hewflow::ring
