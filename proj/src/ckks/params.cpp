// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ckks/params.h"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "hewflow/common/error.h"
#include "hewflow/ring/primes.h"

namespace hewflow::ckks {
namespace {

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

}  // namespace

std::string to_hex(const ParamsHash& hash) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(64);
  for (uint8_t b : hash) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 15]);
  }
  return s;
}

ParamsHash hash_from_hex(const std::string& hex) {
  if (hex.size() != 64) {
    throw ValidationError("params hash must be 64 hex digits");
  }
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ValidationError("params hash is not hexadecimal");
  };
  ParamsHash h{};
  for (size_t i = 0; i < 32; ++i) {
    h[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return h;
}

ParamsHash compute_params_hash(size_t n, const std::vector<uint64_t>& primes,
                               double scale, double sigma, int digit_bits) {
  std::vector<uint8_t> bytes;
  const char tag[] = "hewflow-params-v1";
  bytes.insert(bytes.end(), tag, tag + sizeof(tag) - 1);
  put_u64(bytes, n);
  put_u64(bytes, primes.size());
  for (uint64_t q : primes) put_u64(bytes, q);
  put_u64(bytes, std::bit_cast<uint64_t>(scale));
  put_u64(bytes, std::bit_cast<uint64_t>(sigma));
  put_u64(bytes, static_cast<uint64_t>(digit_bits));
  ParamsHash out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw ParamsError("SHA-256 failed");
  }
  return out;
}

double SchemeParams::log2_modulus(size_t level) const {
  double bits = 0.0;
  for (size_t i = 0; i < level; ++i) bits += std::log2(static_cast<double>(prime(i)));
  return bits;
}

SchemeParams SchemeParams::create(size_t n, std::vector<uint64_t> primes,
                                  double scale, double sigma,
                                  int relin_digit_bits) {
  if (primes.size() < 2) {
    throw ValidationError("at least two limbs are required");
  }
  int exponent = 0;
  if (!(scale > 1.0) || !std::isfinite(scale) ||
      std::frexp(scale, &exponent) != 0.5) {
    throw ValidationError("scale must be a power of two greater than 1");
  }
  if (!(sigma > 0.0)) {
    throw ValidationError("sigma must be positive");
  }
  if (relin_digit_bits < 8 || relin_digit_bits > 60) {
    throw ValidationError("relin digit size must be in [8, 60] bits");
  }
  SchemeParams p;
  p.ring = ring::RingParams::create(n, primes);
  const double q0 = static_cast<double>(primes.front());
  double q_min = q0;
  for (uint64_t q : primes) q_min = std::min(q_min, static_cast<double>(q));
  // One product at scale^2 must survive on the base prime plus one level.
  if (std::log2(scale) * 2 >= std::log2(q0) + std::log2(q_min)) {
    throw ValidationError("scale^2 must be below q0 * q_min");
  }
  p.scale = scale;
  p.sigma = sigma;
  p.relin_digit_bits = relin_digit_bits;
  p.hash = compute_params_hash(n, primes, scale, sigma, relin_digit_bits);
  return p;
}

SchemeParams SchemeParams::desk_default() { return with_depth(2048, 2, 30); }

SchemeParams SchemeParams::with_depth(size_t n, size_t depth, int scale_bits) {
  if (depth < 1) {
    throw ValidationError("depth must be at least 1");
  }
  std::vector<uint64_t> primes = ring::primes_below(n, scale_bits + 10, 1);
  const auto rest = ring::primes_near(n, scale_bits, depth, primes);
  primes.insert(primes.end(), rest.begin(), rest.end());
  return create(n, std::move(primes), std::ldexp(1.0, scale_bits));
}

}  // namespace hewflow::ckks
