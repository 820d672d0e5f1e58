// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/activation.h"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

#include "hewflow/common/error.h"

namespace hewflow::compiler {

double ActivationPolynomial::operator()(double x) const {
  double acc = 0.0;
  for (size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

std::pair<double, double> default_interval(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kSigmoid:
      return {-8.0, 8.0};
    case ActivationKind::kRelu:
      return {-4.0, 4.0};
    default:
      return {-1.0, 1.0};
  }
}

double activation_target(ActivationKind kind, double x) {
  switch (kind) {
    case ActivationKind::kSquare:
      return x * x;
    case ActivationKind::kCubic:
      return x * x * x;
    case ActivationKind::kSigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case ActivationKind::kRelu:
      return x > 0.0 ? x : 0.0;
  }
  throw ValidationError("unsupported activation kind");
}

std::vector<double> chebyshev_nodes(int count, double lo, double hi) {
  std::vector<double> nodes(count);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int k = 0; k < count; ++k) {
    nodes[k] = mid + half * std::cos(std::numbers::pi * (2.0 * k + 1.0) /
                                     (2.0 * count));
  }
  return nodes;
}

double max_fit_error(const ActivationPolynomial& p) {
  double err = 0.0;
  for (int i = 0; i < kErrorGridPoints; ++i) {
    const double x = p.lo + (p.hi - p.lo) * i / (kErrorGridPoints - 1);
    err = std::max(err, std::fabs(activation_target(p.kind, x) - p(x)));
  }
  return err;
}

ActivationPolynomial approximate_activation(
    ActivationKind kind, int degree,
    std::optional<std::pair<double, double>> interval) {
  const auto [lo, hi] = interval.value_or(default_interval(kind));
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ValidationError("activation interval must be finite with lo < hi");
  }
  ActivationPolynomial p;
  p.kind = kind;
  p.lo = lo;
  p.hi = hi;
  if (kind == ActivationKind::kSquare) {
    p.coeffs = {0.0, 0.0, 1.0};
    return p;
  }
  if (kind == ActivationKind::kCubic) {
    p.coeffs = {0.0, 0.0, 0.0, 1.0};
    return p;
  }
  if (degree < 1 || degree > 3) {
    throw ValidationError("activation degree must be 1, 2 or 3");
  }
  const auto nodes = chebyshev_nodes(kFitNodes, lo, hi);
  Eigen::MatrixXd vander(kFitNodes, degree + 1);
  Eigen::VectorXd target(kFitNodes);
  for (int r = 0; r < kFitNodes; ++r) {
    double power = 1.0;
    for (int c = 0; c <= degree; ++c) {
      vander(r, c) = power;
      power *= nodes[r];
    }
    target(r) = activation_target(kind, nodes[r]);
  }
  const Eigen::VectorXd solution = vander.householderQr().solve(target);
  p.coeffs.assign(solution.data(), solution.data() + solution.size());
  p.fit_error = max_fit_error(p);
  return p;
}

ActivationPolynomial polynomial_for(const ActivationLayer& layer) {
  const int degree = layer.degree == 0 ? kDefaultActivationDegree : layer.degree;
  return approximate_activation(layer.kind, degree, layer.interval);
}

int activation_depth(const ActivationPolynomial& p) {
  switch (p.kind) {
    case ActivationKind::kSquare:
      return 1;
    case ActivationKind::kCubic:
      return 2;
    default:
      return p.degree() == 1 ? 1 : 2;
  }
}

}  // namespace hewflow::compiler
