// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include "hewflow/io/workspace.h"

#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

#include "hewflow/common/error.h"
#include "hewflow/io/blob.h"

namespace hewflow::io {

Workspace Workspace::resolve(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return Workspace(*flag);
  if (const char* env = std::getenv("HEWFLOW_WORKSPACE"); env && *env) return Workspace(env);
  return Workspace(fs::current_path());
}

ckks::SchemeParams Workspace::load_params() const {
  std::ifstream in(params());
  if (!in) throw ValidationError(params().string() + " not found; run keygen first");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(params().string() + ": " + e.what());
  }
  return params_from_json(doc);
}

namespace {

Bytes require_file(const fs::path& path, const char* what) {
  if (!fs::exists(path)) {
    throw ValidationError(std::string(what) + " not found at " + path.string());
  }
  return read_file(path.string());
}

}  // namespace

ckks::PublicKey Workspace::load_public_key(const ckks::SchemeParams& params) const {
  return parse_public_key(require_file(public_key(), "public key"), params);
}

ckks::SecretKey Workspace::load_secret_key(const ckks::SchemeParams& params) const {
  return parse_secret_key(require_file(secret_key(), "secret key"), params);
}

std::optional<ckks::RelinKey> Workspace::load_relin_key(
    const ckks::SchemeParams& params) const {
  if (!fs::exists(relin_key())) return std::nullopt;
  return parse_relin_key(read_file(relin_key().string()), params);
}

}  // namespace hewflow::io
