// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "hewflow/ckks/params.h"

namespace hewflow::ckks {

/// Encoded slot vector. The polynomial is kept in the NTT domain.
struct Plaintext {
  RnsPoly poly;
  double scale = 0.0;

  size_t level() const { return poly.limbs(); }
};

/// Two parts normally, three between a raw product and relinearization.
/// All parts are NTT-domain polynomials over the same `level` limbs.
struct Ciphertext {
  std::vector<RnsPoly> parts;
  double scale = 0.0;
  ParamsHash params_hash{};

  size_t level() const { return parts.empty() ? 0 : parts.front().limbs(); }
  size_t size() const { return parts.size(); }
  size_t n() const { return parts.empty() ? 0 : parts.front().n(); }
};

/// Exact serialized length: header plus parts * level * n residues.
size_t ct_size_bytes(const Ciphertext& ct);

}  // namespace hewflow::ckks
