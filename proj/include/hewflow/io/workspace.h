// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "hewflow/ckks/keys.h"
#include "hewflow/ckks/params.h"

namespace hewflow::io {

namespace fs = std::filesystem;

/// Directory holding params.json, the key files, model.json, ciphertexts
/// (ct/), inference outputs (out/) and reports (reports/).
class Workspace {
 public:
  explicit Workspace(fs::path root) : root_(std::move(root)) {}

  /// `flag`, else $HEWFLOW_WORKSPACE, else the current directory.
  static Workspace resolve(const std::optional<std::string>& flag);

  const fs::path& root() const { return root_; }
  fs::path params() const { return root_ / "params.json"; }
  fs::path public_key() const { return root_ / "public.bin"; }
  fs::path secret_key() const { return root_ / "secret.bin"; }
  fs::path relin_key() const { return root_ / "relin.bin"; }
  fs::path model() const { return root_ / "model.json"; }
  fs::path ct_dir() const { return root_ / "ct"; }
  fs::path out_dir() const { return root_ / "out"; }
  fs::path reports_dir() const { return root_ / "reports"; }

  /// Throws ValidationError when params.json is missing.
  ckks::SchemeParams load_params() const;
  ckks::PublicKey load_public_key(const ckks::SchemeParams& params) const;
  ckks::SecretKey load_secret_key(const ckks::SchemeParams& params) const;
  /// Empty when relin.bin does not exist.
  std::optional<ckks::RelinKey> load_relin_key(const ckks::SchemeParams& params) const;

 private:
  fs::path root_;
};

}  // namespace hewflow::io
