// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/ring/sampling.h"

#include <algorithm>
#include <cmath>

#include "hewflow/common/error.h"

namespace hewflow::ring {
namespace {

// Cumulative distribution of |X| for the discrete Gaussian on the integers.
std::vector<double> cumulative_table(double sigma) {
  const int bound = static_cast<int>(std::ceil(10.0 * sigma));
  std::vector<double> weights(bound + 1);
  double total = 0.0;
  for (int k = 0; k <= bound; ++k) {
    const double w = std::exp(-0.5 * k * k / (sigma * sigma));
    weights[k] = k == 0 ? w : 2.0 * w;
    total += weights[k];
  }
  std::vector<double> cdf(bound + 1);
  double acc = 0.0;
  for (int k = 0; k <= bound; ++k) {
    acc += weights[k] / total;
    cdf[k] = acc;
  }
  cdf.back() = 1.0;
  return cdf;
}

}  // namespace

std::vector<int64_t> gaussian_integers(size_t count, double sigma,
                                       Prng& prng) {
  if (!(sigma > 0.0)) {
    throw ValidationError("gaussian sigma must be positive");
  }
  const std::vector<double> cdf = cumulative_table(sigma);
  std::vector<int64_t> out(count);
  for (auto& v : out) {
    const double u = uniform_unit(prng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int64_t magnitude = std::min<int64_t>(it - cdf.begin(),
                                                static_cast<int64_t>(cdf.size()) - 1);
    const bool negative = magnitude != 0 && (prng() & 1);
    v = negative ? -magnitude : magnitude;
  }
  return out;
}

RnsPoly sample_uniform(const RingParamsPtr& params, size_t limbs, Prng& prng,
                       Domain domain) {
  RnsPoly p(params, limbs, domain);
  for (size_t i = 0; i < limbs; ++i) {
    const uint64_t q = params->modulus(i).value();
    for (auto& v : p.limb(i)) v = uniform_below(prng, q);
  }
  return p;
}

RnsPoly sample_ternary(const RingParamsPtr& params, size_t limbs, Prng& prng) {
  std::vector<int64_t> coeffs(params->n());
  for (auto& c : coeffs) {
    c = static_cast<int64_t>(uniform_below(prng, 3)) - 1;
  }
  return RnsPoly::from_signed(params, limbs, coeffs);
}

RnsPoly sample_gaussian(const RingParamsPtr& params, size_t limbs,
                        double sigma, Prng& prng) {
  const auto coeffs = gaussian_integers(params->n(), sigma, prng);
  return RnsPoly::from_signed(params, limbs, coeffs);
}

RnsPoly sample_uniform(const RingParamsPtr& params, size_t limbs,
                       uint64_t seed) {
  Prng prng(seed);
  return sample_uniform(params, limbs, prng);
}

RnsPoly sample_ternary(const RingParamsPtr& params, size_t limbs,
                       uint64_t seed) {
  Prng prng(seed);
  return sample_ternary(params, limbs, prng);
}

RnsPoly sample_gaussian(const RingParamsPtr& params, size_t limbs,
                        double sigma, uint64_t seed) {
  Prng prng(seed);
  return sample_gaussian(params, limbs, sigma, prng);
}

}  // namespace hewflow::ring
