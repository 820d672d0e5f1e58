// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ring/rns_poly.h"

#include <algorithm>

#include "hewflow/common/error.h"

namespace hewflow::ring {

RnsPoly::RnsPoly(RingParamsPtr params, size_t limbs, Domain domain)
    : params_(std::move(params)), limbs_(limbs), domain_(domain) {
  if (!params_) {
    throw ValidationError("RnsPoly requires ring params");
  }
  if (limbs == 0 || limbs > params_->limb_count()) {
    throw ValidationError("limb count out of range");
  }
  data_.assign(limbs * params_->n(), 0);
}

RnsPoly RnsPoly::from_signed(RingParamsPtr params, size_t limbs,
                             std::span<const int64_t> coeffs) {
  RnsPoly p(std::move(params), limbs, Domain::kCoeff);
  if (coeffs.size() != p.n()) {
    throw ValidationError("coefficient count must equal n");
  }
  for (size_t i = 0; i < limbs; ++i) {
    const Modulus& mod = p.params().modulus(i);
    auto dst = p.limb(i);
    for (size_t j = 0; j < coeffs.size(); ++j) {
      dst[j] = mod.from_signed(coeffs[j]);
    }
  }
  return p;
}

bool operator==(const RnsPoly& a, const RnsPoly& b) {
  if (a.limbs_ != b.limbs_ || a.domain_ != b.domain_) return false;
  if (a.params_ != b.params_ &&
      (!a.params_ || !b.params_ || !same_ring(*a.params_, *b.params_))) {
    return false;
  }
  return a.data_ == b.data_;
}

bool same_ring(const RingParams& a, const RingParams& b) {
  if (&a == &b) return true;
  return a.n() == b.n() && a.moduli() == b.moduli();
}

void check_compatible(const RnsPoly& a, const RnsPoly& b) {
  if (a.empty() || b.empty()) {
    throw ParamsError("operation on an empty polynomial");
  }
  if (!same_ring(a.params(), b.params())) {
    throw ParamsError("operands use different ring params");
  }
  if (a.limbs() != b.limbs()) {
    throw ParamsError("operands have different limb counts (" +
                      std::to_string(a.limbs()) + " vs " +
                      std::to_string(b.limbs()) + ")");
  }
  if (a.domain() != b.domain()) {
    throw ParamsError("operands are in different domains");
  }
}

void ntt_forward_inplace(RnsPoly& p) {
  if (p.domain() != Domain::kCoeff) {
    throw ParamsError("forward NTT expects a coefficient-domain polynomial");
  }
  for (size_t i = 0; i < p.limbs(); ++i) {
    p.params().forward(p.limb(i).data(), i);
  }
  p.set_domain(Domain::kNtt);
}

void ntt_inverse_inplace(RnsPoly& p) {
  if (p.domain() != Domain::kNtt) {
    throw ParamsError("inverse NTT expects an NTT-domain polynomial");
  }
  for (size_t i = 0; i < p.limbs(); ++i) {
    p.params().inverse(p.limb(i).data(), i);
  }
  p.set_domain(Domain::kCoeff);
}

RnsPoly ntt_forward(RnsPoly p) {
  ntt_forward_inplace(p);
  return p;
}

RnsPoly ntt_inverse(RnsPoly p) {
  ntt_inverse_inplace(p);
  return p;
}

void add_inplace(RnsPoly& a, const RnsPoly& b) {
  check_compatible(a, b);
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    auto x = a.limb(i);
    auto y = b.limb(i);
    for (size_t j = 0; j < x.size(); ++j) x[j] = mod.add(x[j], y[j]);
  }
}

void sub_inplace(RnsPoly& a, const RnsPoly& b) {
  check_compatible(a, b);
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    auto x = a.limb(i);
    auto y = b.limb(i);
    for (size_t j = 0; j < x.size(); ++j) x[j] = mod.sub(x[j], y[j]);
  }
}

void neg_inplace(RnsPoly& a) {
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    for (auto& v : a.limb(i)) v = mod.neg(v);
  }
}

void mul_inplace(RnsPoly& a, const RnsPoly& b) {
  check_compatible(a, b);
  if (a.domain() != Domain::kNtt) {
    throw ParamsError("pointwise product requires the NTT domain");
  }
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    auto x = a.limb(i);
    auto y = b.limb(i);
    for (size_t j = 0; j < x.size(); ++j) x[j] = mod.mul(x[j], y[j]);
  }
}

void mul_add_inplace(RnsPoly& a, const RnsPoly& b, const RnsPoly& c) {
  check_compatible(a, b);
  check_compatible(b, c);
  if (a.domain() != Domain::kNtt) {
    throw ParamsError("pointwise product requires the NTT domain");
  }
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    auto x = a.limb(i);
    auto y = b.limb(i);
    auto z = c.limb(i);
    for (size_t j = 0; j < x.size(); ++j) {
      x[j] = mod.add(x[j], mod.mul(y[j], z[j]));
    }
  }
}

void mul_scalar_inplace(RnsPoly& a, std::span<const uint64_t> scalars) {
  if (scalars.size() < a.limbs()) {
    throw ValidationError("one scalar per limb required");
  }
  for (size_t i = 0; i < a.limbs(); ++i) {
    const Modulus& mod = a.params().modulus(i);
    const uint64_t w = scalars[i];
    const uint64_t ws = mod.shoup(w);
    for (auto& v : a.limb(i)) v = mod.mul_shoup(v, w, ws);
  }
}

RnsPoly poly_add(const RnsPoly& a, const RnsPoly& b) {
  RnsPoly r = a;
  add_inplace(r, b);
  return r;
}

RnsPoly poly_sub(const RnsPoly& a, const RnsPoly& b) {
  RnsPoly r = a;
  sub_inplace(r, b);
  return r;
}

RnsPoly poly_neg(const RnsPoly& a) {
  RnsPoly r = a;
  neg_inplace(r);
  return r;
}

RnsPoly poly_mul(const RnsPoly& a, const RnsPoly& b) {
  check_compatible(a, b);
  if (a.domain() == Domain::kNtt) {
    RnsPoly r = a;
    mul_inplace(r, b);
    return r;
  }
  RnsPoly r = ntt_forward(a);
  mul_inplace(r, ntt_forward(b));
  ntt_inverse_inplace(r);
  return r;
}

RnsPoly drop_limb(const RnsPoly& p) {
  if (p.limbs() < 2) {
    throw ParamsError("cannot drop the last remaining limb");
  }
  const RingParams& params = p.params();
  const size_t n = p.n();
  const size_t last = p.limbs() - 1;
  const Modulus& q_last = params.modulus(last);
  const bool ntt = p.domain() == Domain::kNtt;

  std::vector<uint64_t> top(p.limb(last).begin(), p.limb(last).end());
  if (ntt) {
    params.inverse(top.data(), last);
  }
  std::vector<int64_t> centered(n);
  for (size_t j = 0; j < n; ++j) {
    centered[j] = q_last.to_centered(top[j]);
  }

  RnsPoly out(p.params_ptr(), last, p.domain());
  std::vector<uint64_t> lifted(n);
  for (size_t i = 0; i < last; ++i) {
    const Modulus& mod = params.modulus(i);
    for (size_t j = 0; j < n; ++j) {
      lifted[j] = mod.from_signed(centered[j]);
    }
    if (ntt) {
      params.forward(lifted.data(), i);
    }
    const uint64_t inv = mod.inv(q_last.value() % mod.value());
    const uint64_t inv_shoup = mod.shoup(inv);
    auto src = p.limb(i);
    auto dst = out.limb(i);
    for (size_t j = 0; j < n; ++j) {
      dst[j] = mod.mul_shoup(mod.sub(src[j], lifted[j]), inv, inv_shoup);
    }
  }
  return out;
}

RnsPoly truncate_limbs(const RnsPoly& p, size_t limbs) {
  if (limbs == 0 || limbs > p.limbs()) {
    throw ParamsError("truncation target out of range");
  }
  RnsPoly out(p.params_ptr(), limbs, p.domain());
  std::copy_n(p.data().begin(), limbs * p.n(), out.mutable_data().begin());
  return out;
}

}  // namespace hewflow::ring
