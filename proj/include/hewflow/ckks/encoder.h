// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hewflow/ckks/ciphertext.h"
#include "hewflow/ring/modulus.h"

namespace hewflow::ckks {

/// Canonical-embedding encoder. Slot j corresponds to evaluation of the
/// plaintext polynomial at zeta^(5^j), zeta = exp(i*pi/n).
class Encoder {
 public:
  explicit Encoder(const SchemeParams& params);

  size_t slot_count() const { return slots_; }

  /// Encodes up to slot_count real values (zero padded) at `scale` over the
  /// first `level` limbs (0 means all limbs). Throws ValidationError for
  /// oversized or non-finite input.
  Plaintext encode(std::span<const double> values, double scale,
                   size_t level = 0) const;
  /// Constant value broadcast to every slot.
  Plaintext encode_constant(double value, double scale, size_t level = 0) const;

  /// Real parts of all slot values.
  std::vector<double> decode(const Plaintext& pt) const;

  /// Slot values to real coefficients (before scaling) and back. Exposed for
  /// tests against the direct embedding.
  std::vector<double> slots_to_coeffs(std::span<const double> values) const;
  std::vector<std::complex<double>> coeffs_to_slots(
      std::span<const double> coeffs) const;

 private:
  void special_fft(std::vector<std::complex<double>>& vals) const;
  void special_ifft(std::vector<std::complex<double>>& vals) const;

  SchemeParams params_;
  size_t n_;
  size_t slots_;
  std::vector<size_t> rot_group_;
  std::vector<std::complex<double>> ksi_pows_;
};

/// round(x) mod q for arbitrary finite doubles, including magnitudes far
/// beyond 2^63.
uint64_t real_to_residue(double x, const ring::Modulus& mod);

}  // namespace hewflow::ckks
