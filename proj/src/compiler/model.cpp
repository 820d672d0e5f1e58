// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/compiler/model.h"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hewflow/common/error.h"
#include "hewflow/compiler/activation.h"

namespace hewflow::compiler {

using nlohmann::json;

size_t Conv2DLayer::kernel_h() const {
  return kernels.empty() || kernels[0].empty() ? 0 : kernels[0][0].size();
}

size_t Conv2DLayer::kernel_w() const {
  return kernel_h() == 0 ? 0 : kernels[0][0][0].size();
}

size_t Conv2DLayer::out_h() const {
  if (kernel_h() == 0 || kernel_h() > height || stride == 0) return 0;
  return (height - kernel_h()) / stride + 1;
}

size_t Conv2DLayer::out_w() const {
  if (kernel_w() == 0 || kernel_w() > width || stride == 0) return 0;
  return (width - kernel_w()) / stride + 1;
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::kSquare:
      return "square";
    case ActivationKind::kCubic:
      return "cubic";
    case ActivationKind::kSigmoid:
      return "sigmoid-approx";
    case ActivationKind::kRelu:
      return "relu-approx";
  }
  return "unknown";
}

ActivationKind activation_from_string(const std::string& name) {
  if (name == "square") return ActivationKind::kSquare;
  if (name == "cubic") return ActivationKind::kCubic;
  if (name == "sigmoid-approx" || name == "sigmoid") return ActivationKind::kSigmoid;
  if (name == "relu-approx" || name == "relu") return ActivationKind::kRelu;
  throw ValidationError("unsupported activation kind '" + name + "'");
}

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ValidationError(std::string(what) + " contains a non-finite value");
    }
  }
}

size_t layer_out(const Layer& layer, size_t in, size_t index) {
  const std::string where = "layer " + std::to_string(index + 1);
  if (const auto* d = std::get_if<DenseLayer>(&layer)) {
    if (d->out_dim() == 0 || d->in_dim() == 0) {
      throw ValidationError(where + ": dense layer has no weights");
    }
    for (const auto& row : d->weights) {
      if (row.size() != d->in_dim()) {
        throw ValidationError(where + ": ragged weight matrix");
      }
      check_finite(row, "weights");
    }
    if (d->bias.size() != d->out_dim()) {
      throw ValidationError(where + ": bias length " + std::to_string(d->bias.size()) +
                            " != output width " + std::to_string(d->out_dim()));
    }
    check_finite(d->bias, "bias");
    if (d->in_dim() != in) {
      throw ValidationError(where + ": dense expects " + std::to_string(d->in_dim()) +
                            " inputs but receives " + std::to_string(in));
    }
    return d->out_dim();
  }
  if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
    if (c->out_channels() == 0 || c->out_h() == 0 || c->out_w() == 0) {
      throw ValidationError(where + ": convolution shape is empty or kernel too large");
    }
    for (const auto& per_out : c->kernels) {
      if (per_out.size() != c->in_channels) {
        throw ValidationError(where + ": kernel input channels mismatch");
      }
      for (const auto& k : per_out) {
        if (k.size() != c->kernel_h()) throw ValidationError(where + ": ragged kernel");
        for (const auto& row : k) {
          if (row.size() != c->kernel_w()) throw ValidationError(where + ": ragged kernel");
          check_finite(row, "kernel");
        }
      }
    }
    if (!c->bias.empty() && c->bias.size() != c->out_channels()) {
      throw ValidationError(where + ": conv bias must have one entry per output channel");
    }
    check_finite(c->bias, "bias");
    if (c->in_dim() != in) {
      throw ValidationError(where + ": conv expects " + std::to_string(c->in_dim()) +
                            " inputs but receives " + std::to_string(in));
    }
    return c->out_dim();
  }
  return in;
}

Matrix matrix_from_json(const json& j) {
  return j.get<Matrix>();
}

}  // namespace

size_t ModelGraph::input_width() const {
  if (layers.empty()) {
    throw ValidationError("model has no layers");
  }
  if (input_dim) return *input_dim;
  for (const auto& layer : layers) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) return d->in_dim();
    if (const auto* c = std::get_if<Conv2DLayer>(&layer)) return c->in_dim();
    if (std::holds_alternative<ActivationLayer>(layer)) break;
  }
  throw ValidationError("model needs input_dim when it starts with an activation");
}

std::vector<size_t> ModelGraph::layer_widths() const {
  size_t width = input_width();
  if (width == 0) {
    throw ValidationError("model input width is zero");
  }
  std::vector<size_t> widths;
  for (size_t i = 0; i < layers.size(); ++i) {
    width = layer_out(layers[i], width, i);
    widths.push_back(width);
  }
  return widths;
}

void ModelGraph::validate() const {
  layer_widths();
  for (const auto& layer : layers) {
    if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
      polynomial_for(*a);
    }
  }
}

ModelGraph model_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array()) {
    throw ValidationError("model JSON must be an object with a 'layers' array");
  }
  ModelGraph model;
  model.name = doc.value("name", "model");
  if (doc.contains("input_dim")) model.input_dim = doc["input_dim"].get<size_t>();
  try {
    for (const auto& j : doc["layers"]) {
      const std::string type = j.at("type").get<std::string>();
      if (type == "dense") {
        DenseLayer d;
        d.weights = matrix_from_json(j.at("weights"));
        d.bias = j.contains("bias") ? j["bias"].get<std::vector<double>>()
                                    : std::vector<double>(d.out_dim(), 0.0);
        model.layers.emplace_back(std::move(d));
      } else if (type == "conv2d") {
        Conv2DLayer c;
        const auto shape = j.at("input_shape").get<std::vector<size_t>>();
        if (shape.size() != 3) {
          throw ValidationError("conv2d input_shape must be [channels, height, width]");
        }
        c.in_channels = shape[0];
        c.height = shape[1];
        c.width = shape[2];
        c.stride = j.value("stride", size_t{1});
        c.kernels = j.at("kernels").get<std::vector<std::vector<Matrix>>>();
        if (j.contains("bias")) c.bias = j["bias"].get<std::vector<double>>();
        model.layers.emplace_back(std::move(c));
      } else if (type == "activation") {
        ActivationLayer a;
        a.kind = activation_from_string(j.at("kind").get<std::string>());
        a.degree = j.value("degree", 0);
        if (j.contains("interval")) {
          const auto iv = j["interval"].get<std::vector<double>>();
          if (iv.size() != 2) throw ValidationError("interval must be [lo, hi]");
          a.interval = std::pair{iv[0], iv[1]};
        }
        model.layers.emplace_back(a);
      } else if (type == "flatten") {
        model.layers.emplace_back(FlattenLayer{});
      } else {
        throw ValidationError("unknown layer type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  }
  model.validate();
  return model;
}

json model_to_json(const ModelGraph& model) {
  json doc;
  doc["name"] = model.name;
  if (model.input_dim) doc["input_dim"] = *model.input_dim;
  json layers = json::array();
  for (const auto& layer : model.layers) {
    json j;
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      j["type"] = "dense";
      j["weights"] = d->weights;
      j["bias"] = d->bias;
    } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
      j["type"] = "conv2d";
      j["input_shape"] = {c->in_channels, c->height, c->width};
      j["stride"] = c->stride;
      j["kernels"] = c->kernels;
      if (!c->bias.empty()) j["bias"] = c->bias;
    } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
      j["type"] = "activation";
      j["kind"] = to_string(a->kind);
      if (a->degree != 0) j["degree"] = a->degree;
      if (a->interval) j["interval"] = {a->interval->first, a->interval->second};
    } else {
      j["type"] = "flatten";
    }
    layers.push_back(std::move(j));
  }
  doc["layers"] = std::move(layers);
  return doc;
}

ModelGraph load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ValidationError("cannot open model file " + path);
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ValidationError("model file " + path + " is not valid JSON: " + e.what());
  }
  return model_from_json(doc);
}

void save_model(const ModelGraph& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("cannot write model file " + path);
  }
  out << model_to_json(model).dump(1) << '\n';
}

std::vector<double> evaluate_model(const ModelGraph& model,
                                   const std::vector<double>& input) {
  if (input.size() != model.input_width()) {
    throw ValidationError("input has " + std::to_string(input.size()) +
                          " features, model expects " +
                          std::to_string(model.input_width()));
  }
  std::vector<double> x = input;
  for (const auto& layer : model.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      std::vector<double> y(d->out_dim());
      for (size_t r = 0; r < d->out_dim(); ++r) {
        double acc = 0.0;
        for (size_t c = 0; c < d->in_dim(); ++c) acc += d->weights[r][c] * x[c];
        y[r] = acc + d->bias[r];
      }
      x = std::move(y);
    } else if (const auto* c = std::get_if<Conv2DLayer>(&layer)) {
      const size_t oh = c->out_h(), ow = c->out_w();
      std::vector<double> y(c->out_dim());
      for (size_t oc = 0; oc < c->out_channels(); ++oc) {
        for (size_t oy = 0; oy < oh; ++oy) {
          for (size_t ox = 0; ox < ow; ++ox) {
            double acc = 0.0;
            for (size_t ic = 0; ic < c->in_channels; ++ic) {
              for (size_t ky = 0; ky < c->kernel_h(); ++ky) {
                for (size_t kx = 0; kx < c->kernel_w(); ++kx) {
                  const size_t iy = oy * c->stride + ky;
                  const size_t ix = ox * c->stride + kx;
                  acc += c->kernels[oc][ic][ky][kx] *
                         x[(ic * c->height + iy) * c->width + ix];
                }
              }
            }
            if (!c->bias.empty()) acc += c->bias[oc];
            y[(oc * oh + oy) * ow + ox] = acc;
          }
        }
      }
      x = std::move(y);
    } else if (const auto* a = std::get_if<ActivationLayer>(&layer)) {
      const ActivationPolynomial p = polynomial_for(*a);
      for (auto& v : x) v = p(v);
    }
  }
  return x;
}

}  // namespace hewflow::compiler
