// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "hewflow/bench/commands.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hewflow::cli::run_cli(args, std::cout, std::cerr);
}
