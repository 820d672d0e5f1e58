// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/reference_models.h"

#include <cmath>
#include <numeric>

#include "hewflow/common/error.h"
#include "hewflow/common/random.h"

namespace hewflow::compiler {

namespace {

constexpr uint64_t kTruthSeed = 0x6865776672756c65ULL;

Matrix gaussian_matrix(size_t rows, size_t cols, double stddev, Prng& prng) {
  Matrix m(rows, std::vector<double>(cols));
  for (auto& row : m) {
    for (double& v : row) v = stddev * standard_normal(prng);
  }
  return m;
}

/// Bias that recentres a layer fed by squared unit-variance activations.
std::vector<double> centring_bias(const Matrix& w) {
  std::vector<double> b(w.size());
  for (size_t r = 0; r < w.size(); ++r) {
    b[r] = -std::accumulate(w[r].begin(), w[r].end(), 0.0);
  }
  return b;
}

std::vector<double> truth_direction() {
  Prng prng(derive_seed(kTruthSeed, 1));
  std::vector<double> w(kTabularFeatures);
  for (double& v : w) v = standard_normal(prng);
  const double norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
  for (double& v : w) v /= norm;
  return w;
}

std::vector<std::string> names(const std::string& prefix, size_t count) {
  std::vector<std::string> out(count);
  for (size_t i = 0; i < count; ++i) out[i] = prefix + std::to_string(i);
  return out;
}

}  // namespace

Dataset synthetic_tabular(size_t samples, uint64_t seed) {
  Prng mix_prng(derive_seed(kTruthSeed, 2));
  Matrix mix = gaussian_matrix(kTabularFeatures, kTabularFeatures, 0.5, mix_prng);
  for (size_t i = 0; i < kTabularFeatures; ++i) mix[i][i] += 1.0;
  std::vector<double> stddev(kTabularFeatures, 0.0);
  for (size_t i = 0; i < kTabularFeatures; ++i) {
    for (double v : mix[i]) stddev[i] += v * v;
    stddev[i] = std::sqrt(stddev[i]);
  }
  const auto truth = truth_direction();

  Dataset data;
  data.feature_names = names("f", kTabularFeatures);
  Prng prng(derive_seed(seed, 3));
  std::vector<double> g(kTabularFeatures);
  for (size_t s = 0; s < samples; ++s) {
    for (double& v : g) v = standard_normal(prng);
    std::vector<double> x(kTabularFeatures);
    for (size_t i = 0; i < kTabularFeatures; ++i) {
      x[i] = std::inner_product(mix[i].begin(), mix[i].end(), g.begin(), 0.0) / stddev[i];
    }
    const double logit = std::inner_product(truth.begin(), truth.end(), x.begin(), 0.0);
    data.labels.push_back(logit > 0.0 ? 1 : 0);
    data.rows.push_back(std::move(x));
  }
  return data;
}

Dataset synthetic_images(size_t samples, uint64_t seed) {
  constexpr size_t kPixels = kImageSide * kImageSide;
  constexpr int kClasses = 10;
  Prng proto_prng(derive_seed(kTruthSeed, 4));
  const Matrix prototypes = gaussian_matrix(kClasses, kPixels, 0.8, proto_prng);

  Dataset data;
  data.feature_names = names("px", kPixels);
  Prng prng(derive_seed(seed, 5));
  for (size_t s = 0; s < samples; ++s) {
    const int label = static_cast<int>(uniform_below(prng, kClasses));
    std::vector<double> x(kPixels);
    for (size_t p = 0; p < kPixels; ++p) {
      x[p] = prototypes[label][p] + 0.6 * standard_normal(prng);
    }
    data.labels.push_back(label);
    data.rows.push_back(std::move(x));
  }
  return data;
}

ModelGraph reference_logistic(uint64_t seed) {
  Prng prng(derive_seed(seed, 10));
  const auto truth = truth_direction();
  DenseLayer dense;
  dense.weights.assign(1, std::vector<double>(kTabularFeatures));
  for (size_t i = 0; i < kTabularFeatures; ++i) {
    dense.weights[0][i] = 2.0 * truth[i] + 0.05 * standard_normal(prng);
  }
  dense.bias = {0.05 * standard_normal(prng)};
  ModelGraph model;
  model.name = "logistic";
  model.layers.emplace_back(std::move(dense));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSigmoid, 3, std::nullopt});
  return model;
}

ModelGraph reference_mlp(uint64_t seed) {
  Prng prng(derive_seed(seed, 11));
  DenseLayer l1{gaussian_matrix(16, kTabularFeatures, 1.0 / std::sqrt(30.0), prng), {}};
  l1.bias.assign(16, 0.0);
  DenseLayer l2{gaussian_matrix(8, 16, 1.0 / std::sqrt(48.0), prng), {}};
  l2.bias = centring_bias(l2.weights);
  DenseLayer l3{gaussian_matrix(1, 8, 1.5 / std::sqrt(24.0), prng), {}};
  l3.bias = centring_bias(l3.weights);
  ModelGraph model;
  model.name = "mlp";
  model.layers.emplace_back(std::move(l1));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSquare, 0, std::nullopt});
  model.layers.emplace_back(std::move(l2));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSquare, 0, std::nullopt});
  model.layers.emplace_back(std::move(l3));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSigmoid, 3, std::nullopt});
  return model;
}

ModelGraph reference_cnn(uint64_t seed) {
  Prng prng(derive_seed(seed, 12));
  Conv2DLayer conv;
  conv.in_channels = 1;
  conv.height = kImageSide;
  conv.width = kImageSide;
  conv.stride = 1;
  conv.kernels.resize(2);
  for (auto& per_out : conv.kernels) {
    per_out.push_back(gaussian_matrix(3, 3, 1.0 / 3.0, prng));
  }
  conv.bias = {0.0, 0.0};
  const size_t conv_out = conv.out_dim();
  DenseLayer l2{gaussian_matrix(16, conv_out, 1.0 / std::sqrt(3.0 * conv_out), prng), {}};
  l2.bias = centring_bias(l2.weights);
  DenseLayer l3{gaussian_matrix(10, 16, 1.0 / std::sqrt(48.0), prng), {}};
  l3.bias = centring_bias(l3.weights);
  ModelGraph model;
  model.name = "cnn";
  model.layers.emplace_back(std::move(conv));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSquare, 0, std::nullopt});
  model.layers.emplace_back(std::move(l2));
  model.layers.emplace_back(ActivationLayer{ActivationKind::kSquare, 0, std::nullopt});
  model.layers.emplace_back(std::move(l3));
  return model;
}

ModelGraph reference_model(const std::string& name, uint64_t seed) {
  if (name == "logistic" || name == "lr") return reference_logistic(seed);
  if (name == "mlp") return reference_mlp(seed);
  if (name == "cnn") return reference_cnn(seed);
  throw ValidationError("unknown reference model '" + name + "'");
}

Dataset reference_dataset(const std::string& name, size_t samples, uint64_t seed) {
  if (name == "cnn") return synthetic_images(samples, seed);
  if (name == "logistic" || name == "lr" || name == "mlp") {
    return synthetic_tabular(samples, seed);
  }
  throw ValidationError("unknown reference model '" + name + "'");
}

}  // namespace hewflow::compiler
