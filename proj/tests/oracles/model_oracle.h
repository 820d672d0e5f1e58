// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

// Plain reference evaluators for the compiler. Least squares goes through
// the normal equations in long double; convolution and circuits are
// interpreted directly. Nothing here shares code with src/.

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "hewflow/compiler/circuit.h"

namespace hewflow::oracle {

/// Degree-d least squares fit of f at `count` first-kind Chebyshev nodes.
inline std::vector<double> normal_equation_fit(const std::function<long double(long double)>& f,
                                               int degree, double lo, double hi,
                                               int count = 512) {
  const int m = degree + 1;
  std::vector<std::vector<long double>> a(m, std::vector<long double>(m + 1, 0.0L));
  const long double mid = 0.5L * (static_cast<long double>(lo) + hi);
  const long double half = 0.5L * (static_cast<long double>(hi) - lo);
  for (int k = 0; k < count; ++k) {
    const long double x =
        mid + half * std::cos(std::numbers::pi_v<long double> * (2.0L * k + 1.0L) /
                              (2.0L * count));
    std::vector<long double> pw(2 * m, 1.0L);
    for (int i = 1; i < 2 * m; ++i) pw[i] = pw[i - 1] * x;
    const long double y = f(x);
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) a[r][c] += pw[r + c];
      a[r][m] += pw[r] * y;
    }
  }
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const long double factor = a[r][col] / a[col][col];
      for (int c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> coeffs(m);
  for (int i = 0; i < m; ++i) coeffs[i] = static_cast<double>(a[i][m] / a[i][i]);
  return coeffs;
}

/// Valid-padding convolution over a channel-major [C][H][W] input.
inline std::vector<double> direct_conv(
    const std::vector<double>& x, size_t channels, size_t h, size_t w, size_t stride,
    const std::vector<std::vector<std::vector<std::vector<double>>>>& kernels,
    const std::vector<double>& bias) {
  const size_t kh = kernels[0][0].size(), kw = kernels[0][0][0].size();
  const size_t oh = (h - kh) / stride + 1, ow = (w - kw) / stride + 1;
  std::vector<double> y;
  for (size_t oc = 0; oc < kernels.size(); ++oc) {
    for (size_t oy = 0; oy < oh; ++oy) {
      for (size_t ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (size_t ic = 0; ic < channels; ++ic) {
          for (size_t ky = 0; ky < kh; ++ky) {
            for (size_t kx = 0; kx < kw; ++kx) {
              acc += kernels[oc][ic][ky][kx] *
                     x[ic * h * w + (oy * stride + ky) * w + ox * stride + kx];
            }
          }
        }
        y.push_back(bias.empty() ? acc : acc + bias[oc]);
      }
    }
  }
  return y;
}

/// Interprets a circuit over one sample of reals. Level ops are identities.
inline std::vector<double> interpret(const compiler::CompiledCircuit& c,
                                     const std::vector<double>& input) {
  std::vector<double> v(c.value_count, 0.0);
  for (size_t i = 0; i < c.input_count; ++i) v[i] = input[i];
  for (const auto& g : c.groups) {
    for (const auto& op : g.ops) {
      const double a = v[op.src[0]];
      switch (op.kind) {
        case compiler::OpKind::kMulPlain:
          v[op.dst] = a * op.constant;
          break;
        case compiler::OpKind::kAddCt:
          v[op.dst] = a + v[op.src[1]];
          break;
        case compiler::OpKind::kAddPlain:
          v[op.dst] = a + op.constant;
          break;
        case compiler::OpKind::kMulCt:
          v[op.dst] = a * v[op.src[1]];
          break;
        default:
          v[op.dst] = a;
          break;
      }
    }
  }
  std::vector<double> out;
  for (auto id : c.outputs) out.push_back(v[id]);
  return out;
}

}  // namespace hewflow::oracle
