// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

// Layer-by-layer float evaluation of a model graph. Only the fitted
// activation coefficients come from the library.

#pragma once

#include <variant>
#include <vector>

#include "hewflow/compiler/activation.h"
#include "hewflow/compiler/model.h"
#include "oracles/model_oracle.h"

namespace hewflow::oracle {

inline double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

inline std::vector<double> direct_model(const compiler::ModelGraph& m, std::vector<double> x) {
  for (const auto& layer : m.layers) {
    if (const auto* d = std::get_if<compiler::DenseLayer>(&layer)) {
      std::vector<double> y(d->out_dim());
      for (size_t r = 0; r < y.size(); ++r) {
        double acc = 0.0;
        for (size_t c = 0; c < d->in_dim(); ++c) acc += d->weights[r][c] * x[c];
        y[r] = acc + d->bias[r];
      }
      x = y;
    } else if (const auto* c = std::get_if<compiler::Conv2DLayer>(&layer)) {
      x = direct_conv(x, c->in_channels, c->height, c->width, c->stride, c->kernels, c->bias);
    } else if (const auto* a = std::get_if<compiler::ActivationLayer>(&layer)) {
      const auto coeffs = compiler::polynomial_for(*a).coeffs;
      for (double& v : x) v = horner(coeffs, v);
    }
  }
  return x;
}

}  // namespace hewflow::oracle
