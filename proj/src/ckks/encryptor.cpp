// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ckks/encryptor.h"

#include <string>

#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/ring/sampling.h"

namespace hewflow::ckks {

void require_params(const SchemeParams& params, const ParamsHash& hash,
                    const char* what) {
  if (hash != params.hash) {
    throw ParamsError(std::string(what) + " was produced under params " +
                      to_hex(hash).substr(0, 16) + "..., expected " +
                      to_hex(params.hash).substr(0, 16) + "...");
  }
}

Ciphertext encrypt(const SchemeParams& params, const PublicKey& pk,
                   const Plaintext& pt, uint64_t seed) {
  require_params(params, pk.params_hash, "public key");
  if (pt.poly.empty() || pt.poly.domain() != Domain::kNtt) {
    throw ParamsError("plaintext must be an NTT-domain polynomial");
  }
  if (!ring::same_ring(pt.poly.params(), *params.ring)) {
    throw ParamsError("plaintext was encoded under different ring params");
  }
  const size_t level = pt.level();
  const auto& ring = params.ring;
  Prng prng(seed);
  const RnsPoly u = ring::ntt_forward(ring::sample_ternary(ring, level, prng));
  RnsPoly c0 = ring::ntt_forward(ring::sample_gaussian(ring, level, params.sigma, prng));
  RnsPoly c1 = ring::ntt_forward(ring::sample_gaussian(ring, level, params.sigma, prng));
  ring::mul_add_inplace(c0, ring::truncate_limbs(pk.b, level), u);
  ring::mul_add_inplace(c1, ring::truncate_limbs(pk.a, level), u);
  ring::add_inplace(c0, pt.poly);
  Ciphertext ct;
  ct.parts.push_back(std::move(c0));
  ct.parts.push_back(std::move(c1));
  ct.scale = pt.scale;
  ct.params_hash = params.hash;
  return ct;
}

Plaintext decrypt(const SchemeParams& params, const SecretKey& sk,
                  const Ciphertext& ct) {
  require_params(params, sk.params_hash, "secret key");
  require_params(params, ct.params_hash, "ciphertext");
  if (ct.size() != 2) {
    throw ParamsError("decrypt expects a relinearized two-part ciphertext, got " +
                      std::to_string(ct.size()) + " parts");
  }
  Plaintext pt{ct.parts[0], ct.scale};
  ring::mul_add_inplace(pt.poly, ct.parts[1],
                        ring::truncate_limbs(sk.s, ct.level()));
  return pt;
}

}  // namespace hewflow::ckks
