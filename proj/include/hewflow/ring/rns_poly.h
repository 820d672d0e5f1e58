// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hewflow/ring/ring_params.h"

namespace hewflow::ring {

using RingParamsPtr = std::shared_ptr<const RingParams>;

enum class Domain : uint8_t { kCoeff = 0, kNtt = 1 };

/// Element of Z_Q[x]/(x^n + 1) stored as residues modulo the first `limbs`
/// primes of its RingParams. Storage is limb-major: limb i occupies
/// [i*n, (i+1)*n).
class RnsPoly {
 public:
  RnsPoly() = default;
  /// Zero polynomial.
  RnsPoly(RingParamsPtr params, size_t limbs, Domain domain);

  /// Coefficient-domain polynomial from small signed coefficients.
  static RnsPoly from_signed(RingParamsPtr params, size_t limbs,
                             std::span<const int64_t> coeffs);

  const RingParams& params() const { return *params_; }
  const RingParamsPtr& params_ptr() const { return params_; }
  size_t n() const { return params_ ? params_->n() : 0; }
  size_t limbs() const { return limbs_; }
  Domain domain() const { return domain_; }
  bool empty() const { return limbs_ == 0; }

  std::span<uint64_t> limb(size_t i) {
    return {data_.data() + i * n(), n()};
  }
  std::span<const uint64_t> limb(size_t i) const {
    return {data_.data() + i * n(), n()};
  }
  const std::vector<uint64_t>& data() const { return data_; }
  std::vector<uint64_t>& mutable_data() { return data_; }

  /// Relabels the domain without transforming. For deserialization only.
  void set_domain(Domain d) { domain_ = d; }

  friend bool operator==(const RnsPoly& a, const RnsPoly& b);

 private:
  RingParamsPtr params_;
  size_t limbs_ = 0;
  Domain domain_ = Domain::kCoeff;
  std::vector<uint64_t> data_;
};

/// Throws ParamsError unless a and b share params, limb count and domain.
void check_compatible(const RnsPoly& a, const RnsPoly& b);
bool same_ring(const RingParams& a, const RingParams& b);

RnsPoly ntt_forward(RnsPoly p);
RnsPoly ntt_inverse(RnsPoly p);
void ntt_forward_inplace(RnsPoly& p);
void ntt_inverse_inplace(RnsPoly& p);

RnsPoly poly_add(const RnsPoly& a, const RnsPoly& b);
RnsPoly poly_sub(const RnsPoly& a, const RnsPoly& b);
RnsPoly poly_neg(const RnsPoly& a);
/// Negacyclic product, returned in the operands' domain.
RnsPoly poly_mul(const RnsPoly& a, const RnsPoly& b);

void add_inplace(RnsPoly& a, const RnsPoly& b);
void sub_inplace(RnsPoly& a, const RnsPoly& b);
void neg_inplace(RnsPoly& a);
/// Pointwise product; both operands must be in the NTT domain.
void mul_inplace(RnsPoly& a, const RnsPoly& b);
/// a += b * c pointwise (NTT domain).
void mul_add_inplace(RnsPoly& a, const RnsPoly& b, const RnsPoly& c);
/// Multiplies limb i by scalars[i] (residue in [0, q_i)).
void mul_scalar_inplace(RnsPoly& a, std::span<const uint64_t> scalars);

/// Exact RNS rescale by the last prime: returns round(p / q_last) on the
/// remaining limbs. Works in either domain. Throws ParamsError on one limb.
RnsPoly drop_limb(const RnsPoly& p);
/// Keeps the first `limbs` residues unchanged (value taken modulo the smaller
/// basis, no division).
RnsPoly truncate_limbs(const RnsPoly& p, size_t limbs);

}  // namespace hewflow::ring
