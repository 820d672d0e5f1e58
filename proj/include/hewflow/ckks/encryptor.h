// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "hewflow/ckks/ciphertext.h"
#include "hewflow/ckks/keys.h"

namespace hewflow::ckks {

/// Public-key encryption at the plaintext's level and scale. Deterministic
/// under `seed`. Throws ParamsError on a params-hash mismatch.
Ciphertext encrypt(const SchemeParams& params, const PublicKey& pk,
                   const Plaintext& pt, uint64_t seed);

/// Computes c0 + c1*s. Rejects three-part ciphertexts and foreign params.
Plaintext decrypt(const SchemeParams& params, const SecretKey& sk,
                  const Ciphertext& ct);

/// Throws ParamsError unless `hash` matches the params fingerprint.
void require_params(const SchemeParams& params, const ParamsHash& hash,
                    const char* what);

}  // namespace hewflow::ckks
