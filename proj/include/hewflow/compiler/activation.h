// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "hewflow/compiler/model.h"

namespace hewflow::compiler {

inline constexpr int kFitNodes = 512;
inline constexpr int kErrorGridPoints = 1000;
inline constexpr int kDefaultActivationDegree = 3;

struct ActivationPolynomial {
  ActivationKind kind = ActivationKind::kSquare;
  std::vector<double> coeffs;  // c0..cd
  double lo = -1.0;
  double hi = 1.0;
  double fit_error = 0.0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double x) const;
};

std::pair<double, double> default_interval(ActivationKind kind);
/// The exact function a fitted kind approximates.
double activation_target(ActivationKind kind, double x);

/// Chebyshev nodes of the first kind mapped to [lo, hi].
std::vector<double> chebyshev_nodes(int count, double lo, double hi);

/// Square and cubic return exact monomials. Sigmoid and relu are fitted by
/// least squares over kFitNodes Chebyshev nodes. Throws ValidationError for
/// degree outside [1, 3] or a degenerate interval.
ActivationPolynomial approximate_activation(
    ActivationKind kind, int degree = kDefaultActivationDegree,
    std::optional<std::pair<double, double>> interval = std::nullopt);

ActivationPolynomial polynomial_for(const ActivationLayer& layer);

/// Max |f - p| over kErrorGridPoints evenly spaced points on [lo, hi].
double max_fit_error(const ActivationPolynomial& p);

/// Multiplicative levels consumed by the emitted evaluation.
int activation_depth(const ActivationPolynomial& p);

}  // namespace hewflow::compiler
