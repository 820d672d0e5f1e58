// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>

#include "hewflow/ckks/ciphertext.h"
#include "hewflow/ckks/keys.h"

namespace hewflow::ckks {

/// Relative scale difference tolerated by additive operations.
inline constexpr double kScaleTolerance = 0x1.0p-20;

/// Homomorphic operations. Stateless apart from read-only params and the
/// optional relinearization key, so one instance may be shared by threads.
///
/// Errors: ParamsError for params-hash, level or scale mismatches and for
/// operations past the bottom level.
class Evaluator {
 public:
  explicit Evaluator(SchemeParams params, const RelinKey* relin_key = nullptr);

  const SchemeParams& params() const { return params_; }

  Ciphertext add(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext sub(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext negate(const Ciphertext& a) const;
  Ciphertext add_plain(const Ciphertext& a, const Plaintext& pt) const;
  Ciphertext sub_plain(const Ciphertext& a, const Plaintext& pt) const;
  /// Adds `value` to every slot, encoded at the ciphertext's scale.
  Ciphertext add_const(const Ciphertext& a, double value) const;

  /// Slotwise product; result scale is a.scale * pt.scale.
  Ciphertext mul_plain(const Ciphertext& a, const Plaintext& pt) const;
  /// Same as mul_plain with a broadcast constant encoded at `const_scale`,
  /// without materializing the plaintext.
  Ciphertext mul_const(const Ciphertext& a, double value,
                       double const_scale) const;

  /// Tensor product, three parts.
  Ciphertext multiply_raw(const Ciphertext& a, const Ciphertext& b) const;
  Ciphertext relinearize(const Ciphertext& a) const;
  /// multiply_raw followed by relinearize.
  Ciphertext mul(const Ciphertext& a, const Ciphertext& b) const;

  /// Divides by the last prime: level - 1, scale / q_last.
  Ciphertext rescale(const Ciphertext& a) const;
  /// Drops limbs down to `level` without dividing; scale unchanged.
  Ciphertext mod_switch_to(const Ciphertext& a, size_t level) const;

  /// sum_i round(weights[i] * weight_scale) * cts[i] (+ bias), with one
  /// modular reduction per coefficient. All inputs must share level and
  /// scale; the result has scale cts[0].scale * weight_scale and the bias is
  /// encoded at that scale.
  Ciphertext multiply_accumulate_const(std::span<const Ciphertext* const> cts,
                                       std::span<const double> weights,
                                       double weight_scale,
                                       std::optional<double> bias) const;

 private:
  void check_ct(const Ciphertext& a) const;
  void check_same_level(const Ciphertext& a, size_t level) const;
  void check_same_scale(double a, double b) const;

  SchemeParams params_;
  const RelinKey* relin_key_;
};

}  // namespace hewflow::ckks
