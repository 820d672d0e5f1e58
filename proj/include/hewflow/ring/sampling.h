// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "hewflow/common/random.h"
#include "hewflow/ring/rns_poly.h"

namespace hewflow::ring {

/// Independent uniform residues in every limb, labeled with `domain` (a
/// uniform polynomial is uniform in either representation).
RnsPoly sample_uniform(const RingParamsPtr& params, size_t limbs, Prng& prng,
                       Domain domain = Domain::kNtt);
/// Coefficients uniform in {-1, 0, 1}; coefficient domain.
RnsPoly sample_ternary(const RingParamsPtr& params, size_t limbs, Prng& prng);
/// Rounded Gaussian coefficients with standard deviation sigma, drawn from a
/// cumulative table truncated at 10 sigma; coefficient domain.
RnsPoly sample_gaussian(const RingParamsPtr& params, size_t limbs,
                        double sigma, Prng& prng);

RnsPoly sample_uniform(const RingParamsPtr& params, size_t limbs,
                       uint64_t seed);
RnsPoly sample_ternary(const RingParamsPtr& params, size_t limbs,
                       uint64_t seed);
RnsPoly sample_gaussian(const RingParamsPtr& params, size_t limbs,
                        double sigma, uint64_t seed);

/// Raw discrete Gaussian integers, exposed for statistical tests.
std::vector<int64_t> gaussian_integers(size_t count, double sigma, Prng& prng);

}  // namespace hewflow::ring
