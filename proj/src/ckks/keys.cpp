// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ckks/keys.h"

#include "hewflow/common/random.h"
#include "hewflow/ring/sampling.h"

namespace hewflow::ckks {

std::vector<RelinDigit> relin_digits(const SchemeParams& params) {
  std::vector<RelinDigit> digits;
  for (size_t i = 0; i < params.max_level(); ++i) {
    const int bits = params.ring->modulus(i).bit_count();
    for (int shift = 0; shift < bits; shift += params.relin_digit_bits) {
      digits.push_back({i, shift});
    }
  }
  return digits;
}

KeySet keygen(const SchemeParams& params, uint64_t seed) {
  const auto& ring = params.ring;
  const size_t limbs = params.max_level();
  uint64_t stream = 0;
  auto next_prng = [&] { return Prng(derive_seed(seed, stream++)); };

  KeySet keys;
  {
    Prng prng = next_prng();
    keys.secret.s = ring::ntt_forward(ring::sample_ternary(ring, limbs, prng));
    keys.secret.params_hash = params.hash;
  }
  const RnsPoly& s = keys.secret.s;

  // Returns (-a*s + e, a) in the NTT domain.
  auto rlwe_sample = [&]() {
    Prng prng_a = next_prng();
    Prng prng_e = next_prng();
    RnsPoly a = ring::sample_uniform(ring, limbs, prng_a, Domain::kNtt);
    RnsPoly b =
        ring::ntt_forward(ring::sample_gaussian(ring, limbs, params.sigma, prng_e));
    RnsPoly as = ring::poly_mul(a, s);
    ring::sub_inplace(b, as);
    return std::pair{std::move(b), std::move(a)};
  };

  auto [pk_b, pk_a] = rlwe_sample();
  keys.public_key = {std::move(pk_b), std::move(pk_a), params.hash};

  const RnsPoly s2 = ring::poly_mul(s, s);
  for (const RelinDigit& d : relin_digits(params)) {
    auto [b, a] = rlwe_sample();
    const ring::Modulus& mod = ring->modulus(d.limb);
    const uint64_t factor = mod.pow(2, static_cast<uint64_t>(d.shift));
    auto dst = b.limb(d.limb);
    auto src = s2.limb(d.limb);
    for (size_t k = 0; k < dst.size(); ++k) {
      dst[k] = mod.add(dst[k], mod.mul(src[k], factor));
    }
    keys.relin.b.push_back(std::move(b));
    keys.relin.a.push_back(std::move(a));
  }
  keys.relin.params_hash = params.hash;
  return keys;
}

}  // namespace hewflow::ckks
