// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hewflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitParams = 3;
inline constexpr int kExitDepth = 4;

inline constexpr const char* kDisclaimer =
    "hewflow: demonstration parameters (ring degree 2048), NOT production-secure. "
    "Do not protect real data with these keys.";

/// Runs `hewflow <args...>` (args excludes the program name) and returns the
/// process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hewflow::cli
