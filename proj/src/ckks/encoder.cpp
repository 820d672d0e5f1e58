// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ckks/encoder.h"

#include <cmath>
#include <numbers>

#include "hewflow/common/error.h"
#include "hewflow/io/blob_layout.h"

namespace hewflow::ckks {

size_t ct_size_bytes(const Ciphertext& ct) {
  return io::blob_size_bytes(ct.size(), ct.level(), ct.n());
}

uint64_t real_to_residue(double x, const ring::Modulus& mod) {
  if (!std::isfinite(x)) {
    throw ValidationError("cannot encode a non-finite value");
  }
  const double r = std::round(x);
  if (std::fabs(r) < 0x1.0p62) {
    return mod.from_signed(static_cast<int64_t>(r));
  }
  int exponent = 0;
  const double mantissa = std::frexp(std::fabs(r), &exponent);
  const auto bits = static_cast<uint64_t>(std::ldexp(mantissa, 53));
  const uint64_t residue =
      mod.mul(bits % mod.value(), mod.pow(2, static_cast<uint64_t>(exponent - 53)));
  return r < 0 ? mod.neg(residue) : residue;
}

Encoder::Encoder(const SchemeParams& params)
    : params_(params), n_(params.n()), slots_(params.n() / 2) {
  const size_t m = 2 * n_;
  rot_group_.resize(slots_);
  size_t five_pow = 1;
  for (size_t j = 0; j < slots_; ++j) {
    rot_group_[j] = five_pow;
    five_pow = (five_pow * 5) % m;
  }
  ksi_pows_.resize(m + 1);
  for (size_t k = 0; k <= m; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(m);
    ksi_pows_[k] = {std::cos(angle), std::sin(angle)};
  }
}

namespace {

void bit_reverse_permute(std::vector<std::complex<double>>& vals) {
  const size_t size = vals.size();
  for (size_t i = 1, j = 0; i < size; ++i) {
    size_t bit = size >> 1;
    for (; j >= bit; bit >>= 1) j -= bit;
    j += bit;
    if (i < j) std::swap(vals[i], vals[j]);
  }
}

}  // namespace

void Encoder::special_fft(std::vector<std::complex<double>>& vals) const {
  const size_t size = vals.size();
  const size_t m = 2 * n_;
  bit_reverse_permute(vals);
  for (size_t len = 2; len <= size; len <<= 1) {
    const size_t lenh = len >> 1;
    const size_t lenq = len << 2;
    for (size_t i = 0; i < size; i += len) {
      for (size_t j = 0; j < lenh; ++j) {
        const size_t idx = (rot_group_[j] % lenq) * (m / lenq);
        const auto u = vals[i + j];
        const auto v = vals[i + j + lenh] * ksi_pows_[idx];
        vals[i + j] = u + v;
        vals[i + j + lenh] = u - v;
      }
    }
  }
}

void Encoder::special_ifft(std::vector<std::complex<double>>& vals) const {
  const size_t size = vals.size();
  const size_t m = 2 * n_;
  for (size_t len = size; len >= 2; len >>= 1) {
    const size_t lenh = len >> 1;
    const size_t lenq = len << 2;
    for (size_t i = 0; i < size; i += len) {
      for (size_t j = 0; j < lenh; ++j) {
        const size_t idx = (lenq - (rot_group_[j] % lenq)) * (m / lenq);
        const auto u = vals[i + j] + vals[i + j + lenh];
        const auto v = (vals[i + j] - vals[i + j + lenh]) * ksi_pows_[idx];
        vals[i + j] = u;
        vals[i + j + lenh] = v;
      }
    }
  }
  bit_reverse_permute(vals);
  const double inv = 1.0 / static_cast<double>(size);
  for (auto& v : vals) v *= inv;
}

std::vector<double> Encoder::slots_to_coeffs(std::span<const double> values) const {
  if (values.size() > slots_) {
    throw ValidationError("vector of " + std::to_string(values.size()) +
                          " values exceeds " + std::to_string(slots_) + " slots");
  }
  std::vector<std::complex<double>> vals(slots_);
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError("cannot encode a non-finite value");
    }
    vals[i] = values[i];
  }
  special_ifft(vals);
  std::vector<double> coeffs(n_);
  for (size_t i = 0; i < slots_; ++i) {
    coeffs[i] = vals[i].real();
    coeffs[i + slots_] = vals[i].imag();
  }
  return coeffs;
}

std::vector<std::complex<double>> Encoder::coeffs_to_slots(
    std::span<const double> coeffs) const {
  std::vector<std::complex<double>> vals(slots_);
  for (size_t i = 0; i < slots_; ++i) {
    vals[i] = {coeffs[i], coeffs[i + slots_]};
  }
  special_fft(vals);
  return vals;
}

Plaintext Encoder::encode(std::span<const double> values, double scale,
                          size_t level) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("encoding scale must be positive");
  }
  if (level == 0) level = params_.max_level();
  const std::vector<double> coeffs = slots_to_coeffs(values);
  Plaintext pt{RnsPoly(params_.ring, level, Domain::kCoeff), scale};
  for (size_t i = 0; i < level; ++i) {
    const ring::Modulus& mod = params_.ring->modulus(i);
    auto limb = pt.poly.limb(i);
    for (size_t k = 0; k < n_; ++k) {
      limb[k] = real_to_residue(coeffs[k] * scale, mod);
    }
  }
  ring::ntt_forward_inplace(pt.poly);
  return pt;
}

Plaintext Encoder::encode_constant(double value, double scale,
                                   size_t level) const {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("encoding scale must be positive");
  }
  if (level == 0) level = params_.max_level();
  // A constant slot vector embeds to the constant polynomial, whose NTT
  // image is that constant in every position.
  Plaintext pt{RnsPoly(params_.ring, level, Domain::kNtt), scale};
  for (size_t i = 0; i < level; ++i) {
    const uint64_t r = real_to_residue(value * scale, params_.ring->modulus(i));
    for (auto& v : pt.poly.limb(i)) v = r;
  }
  return pt;
}

std::vector<double> Encoder::decode(const Plaintext& pt) const {
  if (!(pt.scale > 0.0)) {
    throw ValidationError("cannot decode at a non-positive scale");
  }
  RnsPoly poly = pt.poly;
  double scale = pt.scale;
  const double q0 = static_cast<double>(params_.prime(0));
  // Reduce to the base prime. Excess scale is divided out first so the
  // message stays well inside (-q0/2, q0/2).
  while (poly.limbs() > 1) {
    if (scale * 256.0 < q0) {
      poly = ring::truncate_limbs(poly, 1);
      break;
    }
    scale /= static_cast<double>(params_.prime(poly.limbs() - 1));
    poly = ring::drop_limb(poly);
  }
  if (poly.domain() == Domain::kNtt) ring::ntt_inverse_inplace(poly);
  const ring::Modulus& mod = params_.ring->modulus(0);
  std::vector<double> coeffs(n_);
  for (size_t k = 0; k < n_; ++k) {
    coeffs[k] = static_cast<double>(mod.to_centered(poly.limb(0)[k])) / scale;
  }
  const auto slots = coeffs_to_slots(coeffs);
  std::vector<double> out(slots_);
  for (size_t i = 0; i < slots_; ++i) out[i] = slots[i].real();
  return out;
}

}  // namespace hewflow::ckks
