// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ckks/evaluator.h"

#include <cmath>
#include <string>

#include "hewflow/ckks/encoder.h"
#include "hewflow/ckks/encryptor.h"
#include "hewflow/common/error.h"

namespace hewflow::ckks {

using ring::uint128_t;

Evaluator::Evaluator(SchemeParams params, const RelinKey* relin_key)
    : params_(std::move(params)), relin_key_(relin_key) {
  if (relin_key_ != nullptr) {
    require_params(params_, relin_key_->params_hash, "relinearization key");
  }
}

void Evaluator::check_ct(const Ciphertext& a) const {
  require_params(params_, a.params_hash, "ciphertext");
  if (a.size() < 2 || a.size() > 3) {
    throw ParamsError("ciphertext must have two or three parts");
  }
}

void Evaluator::check_same_level(const Ciphertext& a, size_t level) const {
  if (a.level() != level) {
    throw ParamsError("level mismatch: " + std::to_string(a.level()) + " vs " +
                      std::to_string(level));
  }
}

void Evaluator::check_same_scale(double a, double b) const {
  if (std::fabs(a - b) > kScaleTolerance * std::max(a, b)) {
    throw ParamsError("scale mismatch: 2^" + std::to_string(std::log2(a)) +
                      " vs 2^" + std::to_string(std::log2(b)));
  }
}

Ciphertext Evaluator::add(const Ciphertext& a, const Ciphertext& b) const {
  check_ct(a);
  check_ct(b);
  check_same_level(a, b.level());
  check_same_scale(a.scale, b.scale);
  if (a.size() != b.size()) {
    throw ParamsError("cannot add ciphertexts with different part counts");
  }
  Ciphertext r = a;
  for (size_t i = 0; i < r.size(); ++i) ring::add_inplace(r.parts[i], b.parts[i]);
  return r;
}

Ciphertext Evaluator::sub(const Ciphertext& a, const Ciphertext& b) const {
  return add(a, negate(b));
}

Ciphertext Evaluator::negate(const Ciphertext& a) const {
  check_ct(a);
  Ciphertext r = a;
  for (auto& p : r.parts) ring::neg_inplace(p);
  return r;
}

Ciphertext Evaluator::add_plain(const Ciphertext& a, const Plaintext& pt) const {
  check_ct(a);
  check_same_level(a, pt.level());
  check_same_scale(a.scale, pt.scale);
  Ciphertext r = a;
  ring::add_inplace(r.parts[0], pt.poly);
  return r;
}

Ciphertext Evaluator::sub_plain(const Ciphertext& a, const Plaintext& pt) const {
  check_ct(a);
  check_same_level(a, pt.level());
  check_same_scale(a.scale, pt.scale);
  Ciphertext r = a;
  ring::sub_inplace(r.parts[0], pt.poly);
  return r;
}

Ciphertext Evaluator::add_const(const Ciphertext& a, double value) const {
  check_ct(a);
  Ciphertext r = a;
  for (size_t i = 0; i < r.level(); ++i) {
    const ring::Modulus& mod = params_.ring->modulus(i);
    const uint64_t c = real_to_residue(value * a.scale, mod);
    for (auto& v : r.parts[0].limb(i)) v = mod.add(v, c);
  }
  return r;
}

Ciphertext Evaluator::mul_plain(const Ciphertext& a, const Plaintext& pt) const {
  check_ct(a);
  check_same_level(a, pt.level());
  Ciphertext r = a;
  for (auto& p : r.parts) ring::mul_inplace(p, pt.poly);
  r.scale = a.scale * pt.scale;
  return r;
}

Ciphertext Evaluator::mul_const(const Ciphertext& a, double value,
                                double const_scale) const {
  check_ct(a);
  std::vector<uint64_t> scalars(a.level());
  for (size_t i = 0; i < a.level(); ++i) {
    scalars[i] = real_to_residue(value * const_scale, params_.ring->modulus(i));
  }
  Ciphertext r = a;
  for (auto& p : r.parts) ring::mul_scalar_inplace(p, scalars);
  r.scale = a.scale * const_scale;
  return r;
}

Ciphertext Evaluator::multiply_raw(const Ciphertext& a,
                                   const Ciphertext& b) const {
  check_ct(a);
  check_ct(b);
  check_same_level(a, b.level());
  if (a.size() != 2 || b.size() != 2) {
    throw ParamsError("ciphertext product expects two-part operands");
  }
  Ciphertext r;
  r.parts.push_back(ring::poly_mul(a.parts[0], b.parts[0]));
  RnsPoly d1 = ring::poly_mul(a.parts[0], b.parts[1]);
  ring::mul_add_inplace(d1, a.parts[1], b.parts[0]);
  r.parts.push_back(std::move(d1));
  r.parts.push_back(ring::poly_mul(a.parts[1], b.parts[1]));
  r.scale = a.scale * b.scale;
  r.params_hash = params_.hash;
  return r;
}

Ciphertext Evaluator::relinearize(const Ciphertext& a) const {
  check_ct(a);
  if (a.size() == 2) return a;
  if (relin_key_ == nullptr) {
    throw ParamsError("relinearization key is required");
  }
  const size_t level = a.level();
  const size_t n = params_.n();
  const int bits = params_.relin_digit_bits;
  const uint64_t mask = (uint64_t{1} << bits) - 1;
  const auto digits = relin_digits(params_);
  if (digits.size() != relin_key_->digit_count()) {
    throw ParamsError("relinearization key does not match the params");
  }

  Ciphertext r;
  r.parts = {a.parts[0], a.parts[1]};
  r.scale = a.scale;
  r.params_hash = a.params_hash;

  std::vector<uint64_t> c2_coeff(n);
  std::vector<uint64_t> digit(n);
  for (size_t d = 0; d < digits.size(); ++d) {
    const size_t src_limb = digits[d].limb;
    if (src_limb >= level) continue;
    if (d == 0 || digits[d - 1].limb != src_limb) {
      auto c2 = a.parts[2].limb(src_limb);
      std::copy(c2.begin(), c2.end(), c2_coeff.begin());
      params_.ring->inverse(c2_coeff.data(), src_limb);
    }
    const RnsPoly& kb = relin_key_->b[d];
    const RnsPoly& ka = relin_key_->a[d];
    for (size_t j = 0; j < level; ++j) {
      const ring::Modulus& mod = params_.ring->modulus(j);
      for (size_t k = 0; k < n; ++k) {
        digit[k] = mod.reduce((c2_coeff[k] >> digits[d].shift) & mask);
      }
      params_.ring->forward(digit.data(), j);
      auto out0 = r.parts[0].limb(j);
      auto out1 = r.parts[1].limb(j);
      auto b = kb.limb(j);
      auto ak = ka.limb(j);
      for (size_t k = 0; k < n; ++k) {
        out0[k] = mod.add(out0[k], mod.mul(digit[k], b[k]));
        out1[k] = mod.add(out1[k], mod.mul(digit[k], ak[k]));
      }
    }
  }
  return r;
}

Ciphertext Evaluator::mul(const Ciphertext& a, const Ciphertext& b) const {
  if (relin_key_ == nullptr) {
    throw ParamsError("relinearization key is required for ciphertext products");
  }
  return relinearize(multiply_raw(a, b));
}

Ciphertext Evaluator::rescale(const Ciphertext& a) const {
  check_ct(a);
  if (a.level() < 2) {
    throw ParamsError("cannot rescale at the bottom level");
  }
  const double q_last = static_cast<double>(params_.prime(a.level() - 1));
  Ciphertext r;
  r.parts.reserve(a.size());
  for (const auto& p : a.parts) r.parts.push_back(ring::drop_limb(p));
  r.scale = a.scale / q_last;
  r.params_hash = a.params_hash;
  return r;
}

Ciphertext Evaluator::mod_switch_to(const Ciphertext& a, size_t level) const {
  check_ct(a);
  if (level < 1 || level > a.level()) {
    throw ParamsError("mod-switch target " + std::to_string(level) +
                      " is outside [1, " + std::to_string(a.level()) + "]");
  }
  if (level == a.level()) return a;
  Ciphertext r;
  r.parts.reserve(a.size());
  for (const auto& p : a.parts) r.parts.push_back(ring::truncate_limbs(p, level));
  r.scale = a.scale;
  r.params_hash = a.params_hash;
  return r;
}

Ciphertext Evaluator::multiply_accumulate_const(
    std::span<const Ciphertext* const> cts, std::span<const double> weights,
    double weight_scale, std::optional<double> bias) const {
  if (cts.empty() || cts.size() != weights.size()) {
    throw ValidationError("need one weight per ciphertext");
  }
  const Ciphertext& first = *cts[0];
  for (const Ciphertext* ct : cts) {
    check_ct(*ct);
    check_same_level(*ct, first.level());
    check_same_scale(ct->scale, first.scale);
    if (ct->size() != 2) {
      throw ParamsError("accumulation expects two-part ciphertexts");
    }
  }
  const size_t level = first.level();
  const size_t n = params_.n();
  Ciphertext r;
  r.parts = {RnsPoly(params_.ring, level, Domain::kNtt),
             RnsPoly(params_.ring, level, Domain::kNtt)};
  r.scale = first.scale * weight_scale;
  r.params_hash = params_.hash;

  std::vector<uint128_t> acc0(n), acc1(n);
  for (size_t i = 0; i < level; ++i) {
    const ring::Modulus& mod = params_.ring->modulus(i);
    const uint128_t q1 = mod.value() - 1;
    const uint128_t budget = ~uint128_t{0} / (q1 * q1);
    std::fill(acc0.begin(), acc0.end(), 0);
    std::fill(acc1.begin(), acc1.end(), 0);
    uint128_t pending = 0;
    auto fold = [&] {
      for (size_t k = 0; k < n; ++k) {
        acc0[k] = mod.reduce_wide(acc0[k]);
        acc1[k] = mod.reduce_wide(acc1[k]);
      }
      pending = 1;
    };
    for (size_t t = 0; t < cts.size(); ++t) {
      if (pending + 1 >= budget) fold();
      const uint64_t w = real_to_residue(weights[t] * weight_scale, mod);
      auto x0 = cts[t]->parts[0].limb(i);
      auto x1 = cts[t]->parts[1].limb(i);
      for (size_t k = 0; k < n; ++k) {
        acc0[k] += static_cast<uint128_t>(x0[k]) * w;
        acc1[k] += static_cast<uint128_t>(x1[k]) * w;
      }
      ++pending;
    }
    const uint64_t b =
        bias ? real_to_residue(*bias * r.scale, mod) : uint64_t{0};
    auto out0 = r.parts[0].limb(i);
    auto out1 = r.parts[1].limb(i);
    for (size_t k = 0; k < n; ++k) {
      out0[k] = mod.add(mod.reduce_wide(acc0[k]), b);
      out1[k] = mod.reduce_wide(acc1[k]);
    }
  }
  return r;
}

}  // namespace hewflow::ckks
