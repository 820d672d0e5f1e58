// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hewflow/ckks/ciphertext.h"
#include "hewflow/ckks/keys.h"
#include "hewflow/ckks/params.h"
#include "hewflow/io/blob_layout.h"

namespace hewflow::io {

using Bytes = std::vector<uint8_t>;

struct BlobHeader {
  uint16_t version = 0;
  ckks::ParamsHash params_hash{};
  BlobKind kind = BlobKind::kCiphertext;
  size_t level = 0;
  size_t parts = 0;
  size_t n = 0;
  double scale = 0.0;
};

/// Checks magic, version and total length. Throws ValidationError.
BlobHeader read_header(const Bytes& blob);

Bytes serialize(const ckks::Ciphertext& ct);
Bytes serialize(const ckks::SecretKey& sk);
Bytes serialize(const ckks::PublicKey& pk);
Bytes serialize(const ckks::RelinKey& rk);

// Parsers fail closed: ParamsError when the embedded params hash or ring
// degree differs from `params`, ValidationError for any malformed content.
ckks::Ciphertext parse_ciphertext(const Bytes& blob, const ckks::SchemeParams& params);
ckks::SecretKey parse_secret_key(const Bytes& blob, const ckks::SchemeParams& params);
ckks::PublicKey parse_public_key(const Bytes& blob, const ckks::SchemeParams& params);
ckks::RelinKey parse_relin_key(const Bytes& blob, const ckks::SchemeParams& params);

Bytes read_file(const std::string& path);
void write_file(const std::string& path, const Bytes& bytes);

/// {"n", "primes", "scale_bits", "sigma", "relin_digit_bits", "hash"}.
nlohmann::json params_to_json(const ckks::SchemeParams& params);
/// Rebuilds the params and throws ParamsError if the recorded hash differs.
ckks::SchemeParams params_from_json(const nlohmann::json& doc);

}  // namespace hewflow::io
