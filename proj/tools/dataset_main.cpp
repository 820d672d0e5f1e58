// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

// Writes a synthetic dataset matching a reference model as CSV.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hewflow/compiler/reference_models.h"
#include "hewflow/io/csv.h"

int main(int argc, char** argv) {
  CLI::App app{"hewflow-dataset: synthetic inputs for the reference models"};
  std::string model = "logistic";
  std::string output = "data.csv";
  std::string labels;
  size_t samples = 1024;
  uint64_t seed = 1;
  app.add_option("--model", model, "logistic|mlp|cnn")
      ->check(CLI::IsMember({"logistic", "mlp", "cnn"}));
  app.add_option("--samples", samples, "Rows to generate");
  app.add_option("--seed", seed, "Generator seed");
  app.add_option("--output", output, "Feature CSV path");
  app.add_option("--labels", labels, "Optional label CSV path");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto data = hewflow::compiler::reference_dataset(model, samples, seed);
    hewflow::io::write_csv(output, {data.feature_names, data.rows});
    if (!labels.empty()) {
      hewflow::io::Table t{{"label"}, {}};
      for (int y : data.labels) t.rows.push_back({static_cast<double>(y)});
      hewflow::io::write_csv(labels, t);
    }
    std::cout << "wrote " << data.rows.size() << " rows x " << data.feature_names.size()
              << " features to " << output << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
