// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hewflow {

// Exception families map one-to-one onto the CLI exit codes:
//   ValidationError -> 2, ParamsError -> 3, DepthError -> 4.

/// Malformed input: bad shapes, bad files, out-of-range arguments.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Cryptographic or parameter inconsistency: params-hash mismatch, level or
/// scale mismatch between operands, wrong polynomial domain.
class ParamsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Resource exhaustion: multiplicative depth beyond the modulus chain.
class DepthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hewflow
