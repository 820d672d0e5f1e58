// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hewflow::compiler {

using Matrix = std::vector<std::vector<double>>;

struct DenseLayer {
  Matrix weights;             // out x in, row-major
  std::vector<double> bias;   // out

  size_t in_dim() const { return weights.empty() ? 0 : weights.front().size(); }
  size_t out_dim() const { return weights.size(); }
};

/// Valid-padding 2-D convolution over a C x H x W input.
struct Conv2DLayer {
  size_t in_channels = 1;
  size_t height = 0;
  size_t width = 0;
  size_t stride = 1;
  /// kernels[out_channel][in_channel][ky][kx]
  std::vector<std::vector<Matrix>> kernels;
  /// Optional per-output-channel bias.
  std::vector<double> bias;

  size_t out_channels() const { return kernels.size(); }
  size_t kernel_h() const;
  size_t kernel_w() const;
  size_t out_h() const;
  size_t out_w() const;
  size_t in_dim() const { return in_channels * height * width; }
  size_t out_dim() const { return out_channels() * out_h() * out_w(); }
};

enum class ActivationKind { kSquare, kCubic, kSigmoid, kRelu };

std::string to_string(ActivationKind kind);
ActivationKind activation_from_string(const std::string& name);

struct ActivationLayer {
  ActivationKind kind = ActivationKind::kSquare;
  /// Fitted kinds only; 0 means the default of 3.
  int degree = 0;
  /// Fitted kinds only; unset means the per-kind default interval.
  std::optional<std::pair<double, double>> interval;
};

/// Shape no-op under feature-major packing.
struct FlattenLayer {};

using Layer = std::variant<DenseLayer, Conv2DLayer, ActivationLayer, FlattenLayer>;

struct ModelGraph {
  std::string name;
  std::vector<Layer> layers;
  /// Required when the first layer does not fix the input width.
  std::optional<size_t> input_dim;

  /// Input width and per-layer output widths. Throws ValidationError on
  /// incompatible shapes, non-finite weights or an empty model.
  size_t input_width() const;
  std::vector<size_t> layer_widths() const;
  void validate() const;
  size_t output_width() const { return layer_widths().back(); }
};

ModelGraph model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelGraph& model);
ModelGraph load_model(const std::string& path);
void save_model(const ModelGraph& model, const std::string& path);

/// Direct float evaluation of the model with the polynomial activations the
/// compiler would use.
std::vector<double> evaluate_model(const ModelGraph& model,
                                   const std::vector<double>& input);

}  // namespace hewflow::compiler
