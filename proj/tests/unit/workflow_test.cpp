// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hewflow/bench/bench.h"
#include "hewflow/bench/commands.h"
#include "hewflow/ckks/encryptor.h"
#include "hewflow/common/error.h"
#include "hewflow/compiler/reference_models.h"
#include "hewflow/engine/engine.h"
#include "hewflow/io/blob.h"
#include "hewflow/io/blob_layout.h"
#include "hewflow/io/csv.h"
#include "hewflow/io/workspace.h"

namespace hewflow {
namespace {

namespace fs = std::filesystem;
using ckks::SchemeParams;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun hewflow_cli(const fs::path& ws, std::vector<std::string> args) {
  args.insert(args.begin(), {"--workspace", ws.string()});
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hewflow_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Blob format --------------------------------------------------------------

class BlobTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    params_ = new SchemeParams(SchemeParams::with_depth(2048, 3));
    keys_ = new ckks::KeySet(ckks::keygen(*params_, 77));
  }
  static void TearDownTestSuite() {
    delete keys_;
    delete params_;
  }
  static ckks::Ciphertext sample_ct() {
    const auto batch = engine::encrypt_batch({{0.25, -1.5}, {2.0, 0.125}}, 2,
                                             keys_->public_key, *params_, 5);
    return batch.cts[0];
  }
  static SchemeParams* params_;
  static ckks::KeySet* keys_;
};
SchemeParams* BlobTest::params_ = nullptr;
ckks::KeySet* BlobTest::keys_ = nullptr;

TEST_F(BlobTest, RoundTripsAreByteIdentical) {
  const auto ct = sample_ct();
  const auto b_ct = io::serialize(ct);
  EXPECT_EQ(b_ct.size(), io::blob_size_bytes(2, ct.level(), 2048));
  EXPECT_EQ(io::serialize(io::parse_ciphertext(b_ct, *params_)), b_ct);

  const auto b_sk = io::serialize(keys_->secret);
  EXPECT_EQ(io::serialize(io::parse_secret_key(b_sk, *params_)), b_sk);
  const auto b_pk = io::serialize(keys_->public_key);
  EXPECT_EQ(io::serialize(io::parse_public_key(b_pk, *params_)), b_pk);
  const auto b_rk = io::serialize(keys_->relin);
  EXPECT_EQ(io::serialize(io::parse_relin_key(b_rk, *params_)), b_rk);
}

TEST_F(BlobTest, HeaderFieldsFollowTheLayout) {
  const auto blob = io::serialize(sample_ct());
  EXPECT_EQ(std::string(blob.begin(), blob.begin() + 4), "HEWF");
  EXPECT_EQ(blob[4] | (blob[5] << 8), io::kBlobVersion);
  EXPECT_TRUE(std::equal(params_->hash.begin(), params_->hash.end(), blob.begin() + 6));
  const auto h = io::read_header(blob);
  EXPECT_EQ(h.kind, io::BlobKind::kCiphertext);
  EXPECT_EQ(h.parts, 2u);
  EXPECT_EQ(h.n, 2048u);
  EXPECT_EQ(h.scale, params_->scale);
}

TEST_F(BlobTest, FailsClosed) {
  const auto blob = io::serialize(sample_ct());
  auto tampered = blob;
  tampered[10] ^= 0x01;
  EXPECT_THROW(io::parse_ciphertext(tampered, *params_), ParamsError);

  const auto other = SchemeParams::with_depth(2048, 4);
  EXPECT_THROW(io::parse_ciphertext(blob, other), ParamsError);
  EXPECT_THROW(io::parse_secret_key(io::serialize(keys_->secret), other), ParamsError);

  auto truncated = blob;
  truncated.pop_back();
  EXPECT_THROW(io::parse_ciphertext(truncated, *params_), ValidationError);
  auto bad_magic = blob;
  bad_magic[0] = 'X';
  EXPECT_THROW(io::parse_ciphertext(bad_magic, *params_), ValidationError);
  EXPECT_THROW(io::parse_secret_key(blob, *params_), ValidationError);

  auto unreduced = blob;
  std::fill(unreduced.end() - 8, unreduced.end(), 0xff);
  EXPECT_THROW(io::parse_ciphertext(unreduced, *params_), ValidationError);
}

TEST_F(BlobTest, ParamsJsonRoundTrip) {
  const auto doc = io::params_to_json(*params_);
  EXPECT_EQ(io::params_from_json(doc).hash, params_->hash);
  auto bad = doc;
  bad["hash"] = std::string(64, '0');
  EXPECT_THROW(io::params_from_json(bad), ParamsError);
}

// CSV ----------------------------------------------------------------------

io::Table csv_text(const std::string& text) {
  std::istringstream in(text);
  return io::parse_csv(in, "in.csv");
}

TEST(Csv, DiagnosticsNameRowAndColumn) {
  try {
    csv_text("a,b\n1,2\n3,x\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("in.csv:3:2"), std::string::npos) << e.what();
  }
  try {
    csv_text("a,b\n1,2,3\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("in.csv:2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(csv_text("a\nnan\n"), ValidationError);
  EXPECT_THROW(csv_text(""), ValidationError);
  const auto t = csv_text("a,b\n\n0.5,-2e-3\n");
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.rows[0][1], -2e-3);
}

// CLI ----------------------------------------------------------------------

TEST(Cli, KeygenRefusesToOverwriteWithoutForce) {
  const auto ws = fresh_dir("keygen");
  const auto first = hewflow_cli(ws, {"keygen", "--depth", "3"});
  ASSERT_EQ(first.code, 0) << first.err;
  EXPECT_NE(first.err.find("NOT production-secure"), std::string::npos);
  for (const char* f : {"params.json", "public.bin", "secret.bin", "relin.bin"}) {
    EXPECT_TRUE(fs::exists(ws / f)) << f;
  }
  const auto again = hewflow_cli(ws, {"keygen", "--depth", "3"});
  EXPECT_EQ(again.code, cli::kExitValidation);
  EXPECT_NE(again.err.find("--force"), std::string::npos);
  EXPECT_EQ(hewflow_cli(ws, {"keygen", "--depth", "3", "--force"}).code, 0);
}

TEST(Cli, SeedMakesKeysReproducible) {
  const auto a = fresh_dir("seed_a");
  const auto b = fresh_dir("seed_b");
  ASSERT_EQ(hewflow_cli(a, {"--seed", "9", "keygen", "--depth", "2"}).code, 0);
  ASSERT_EQ(hewflow_cli(b, {"--seed", "9", "keygen", "--depth", "2"}).code, 0);
  for (const char* f : {"params.json", "public.bin", "secret.bin", "relin.bin"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
  }
  const auto c = fresh_dir("seed_c");
  ASSERT_EQ(hewflow_cli(c, {"--seed", "10", "keygen", "--depth", "2"}).code, 0);
  EXPECT_NE(slurp(a / "secret.bin"), slurp(c / "secret.bin"));
}

TEST(Cli, UsageErrorsMapToExitCodes) {
  const auto ws = fresh_dir("usage");
  EXPECT_EQ(hewflow_cli(ws, {"frobnicate"}).code, cli::kExitValidation);
  EXPECT_EQ(hewflow_cli(ws, {"infer", "--fuse", "maybe"}).code, cli::kExitValidation);
  const auto no_keys = hewflow_cli(ws, {"encrypt", "--input", "nothing.csv"});
  EXPECT_EQ(no_keys.code, cli::kExitValidation);
  EXPECT_NE(no_keys.err.find("keygen"), std::string::npos);
  EXPECT_EQ(hewflow_cli(ws, {"--help"}).code, 0);
}

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    ws_ = new fs::path(fresh_dir("pipeline"));
    const auto r = hewflow_cli(*ws_, {"--seed", "11", "keygen"});
    ASSERT_EQ(r.code, 0) << r.err;
    outputs_ = new std::vector<CliRun>();
  }
  static void TearDownTestSuite() {
    delete outputs_;
    delete ws_;
  }
  CliRun cli_run(std::vector<std::string> args) {
    auto r = hewflow_cli(*ws_, std::move(args));
    outputs_->push_back(r);
    return r;
  }
  static fs::path* ws_;
  static std::vector<CliRun>* outputs_;
};
fs::path* PipelineTest::ws_ = nullptr;
std::vector<CliRun>* PipelineTest::outputs_ = nullptr;

TEST_F(PipelineTest, FileOnlyPipelineMatchesPlaintextModel) {
  const auto data = compiler::reference_dataset("logistic", 200, 5);
  io::write_csv((*ws_ / "data.csv").string(), {data.feature_names, data.rows});
  ASSERT_EQ(cli_run({"compile", "--model", "logistic"}).code, 0);
  EXPECT_TRUE(fs::exists(*ws_ / "model.json"));
  EXPECT_TRUE(fs::exists(*ws_ / "circuit.txt"));
  const auto enc = cli_run({"encrypt", "--input", (*ws_ / "data.csv").string(), "--batch", "128"});
  ASSERT_EQ(enc.code, 0) << enc.err;
  EXPECT_TRUE(fs::exists(*ws_ / "ct/batch_1/x29.hect"));
  const auto inf = cli_run({"infer"});
  ASSERT_EQ(inf.code, 0) << inf.err;
  const auto metrics = nlohmann::json::parse(slurp(*ws_ / "out/metrics.json"));
  EXPECT_EQ(metrics["batches"].size(), 2u);
  EXPECT_GT(metrics["batches"][0]["dispatches"].get<size_t>(), 0u);
  const auto dec = cli_run({"decrypt"});
  ASSERT_EQ(dec.code, 0) << dec.err;

  const auto pred = io::read_csv((*ws_ / "predictions.csv").string());
  ASSERT_EQ(pred.rows.size(), 200u);
  const auto model = compiler::load_model((*ws_ / "model.json").string());
  engine::Samples expected;
  for (const auto& row : data.rows) expected.push_back(compiler::evaluate_model(model, row));
  const auto dev = engine::compare_outputs(pred.rows, expected);
  EXPECT_LT(dev.mean_error_over_range, 0.002);
  EXPECT_GE(dev.agreement, 0.998);
}

TEST_F(PipelineTest, OptimizationFlagsDoNotChangePredictions) {
  const auto data = compiler::reference_dataset("logistic", 4, 8);
  io::write_csv((*ws_ / "small.csv").string(), {data.feature_names, data.rows});
  ASSERT_EQ(cli_run({"compile", "--model", "logistic"}).code, 0);
  ASSERT_EQ(cli_run({"encrypt", "--input", (*ws_ / "small.csv").string(), "--batch", "1"}).code,
            0);
  const auto off = cli_run({"infer", "--fuse", "off", "--rescale", "off", "--batch-packing", "off"});
  ASSERT_EQ(off.code, 0) << off.err;
  ASSERT_EQ(cli_run({"decrypt", "--output", (*ws_ / "off.csv").string()}).code, 0);
  ASSERT_EQ(cli_run({"infer"}).code, 0);
  ASSERT_EQ(cli_run({"decrypt", "--output", (*ws_ / "on.csv").string()}).code, 0);
  const auto a = io::read_csv((*ws_ / "off.csv").string());
  const auto b = io::read_csv((*ws_ / "on.csv").string());
  ASSERT_EQ(a.rows.size(), 4u);
  const auto dev = engine::compare_outputs(a.rows, b.rows);
  EXPECT_LT(dev.max_abs_error, 1e-3);
  EXPECT_EQ(dev.agreement, 1.0);

  ASSERT_EQ(cli_run({"encrypt", "--input", (*ws_ / "small.csv").string(), "--batch", "4"}).code,
            0);
  EXPECT_EQ(cli_run({"infer", "--batch-packing", "off"}).code, cli::kExitValidation);
}

TEST_F(PipelineTest, EdgeCasesAndErrors) {
  const fs::path empty = *ws_ / "empty.csv";
  {
    std::ofstream(empty) << "f0,f1\n";
  }
  const fs::path two = *ws_ / "two.csv";
  {
    std::ofstream(two) << "f0,f1\n1,2\n";
  }
  ASSERT_EQ(cli_run({"compile", "--model", "logistic"}).code, 0);
  EXPECT_EQ(cli_run({"encrypt", "--input", two.string()}).code, cli::kExitValidation);
  fs::rename(*ws_ / "model.json", *ws_ / "model.saved");
  ASSERT_EQ(cli_run({"encrypt", "--input", empty.string()}).code, 0);
  const auto manifest = nlohmann::json::parse(slurp(*ws_ / "ct/manifest.json"));
  EXPECT_EQ(manifest["rows"], 0);
  EXPECT_TRUE(manifest["batches"].empty());
  EXPECT_EQ(cli_run({"encrypt", "--input", two.string(), "--batch", "2000"}).code,
            cli::kExitValidation);
  fs::rename(*ws_ / "model.saved", *ws_ / "model.json");

  const auto data = compiler::reference_dataset("mlp", 3, 2);
  io::write_csv((*ws_ / "mlp.csv").string(), {data.feature_names, data.rows});
  ASSERT_EQ(cli_run({"encrypt", "--input", (*ws_ / "mlp.csv").string()}).code, 0);
  fs::rename(*ws_ / "relin.bin", *ws_ / "relin.saved");
  const auto no_relin = cli_run({"infer", "--model", "mlp"});
  fs::rename(*ws_ / "relin.saved", *ws_ / "relin.bin");
  EXPECT_EQ(no_relin.code, cli::kExitParams) << no_relin.err;
  EXPECT_EQ(cli_run({"infer", "--model", "cnn"}).code, cli::kExitValidation);

  const auto other = fresh_dir("pipeline_other");
  ASSERT_EQ(hewflow_cli(other, {"keygen", "--depth", "6"}).code, 0);
  fs::copy(*ws_ / "ct", other / "ct", fs::copy_options::recursive);
  const auto crossed = hewflow_cli(other, {"infer", "--model", "mlp"});
  EXPECT_EQ(crossed.code, cli::kExitParams) << crossed.err;
  fs::copy_file(*ws_ / "ct/manifest.json", other / "ct/manifest.json",
                fs::copy_options::overwrite_existing);
  auto doc = nlohmann::json::parse(slurp(other / "ct/manifest.json"));
  doc["params_hash"] = nlohmann::json::parse(slurp(other / "params.json"))["hash"];
  std::ofstream(other / "ct/manifest.json") << doc.dump();
  const auto swapped = hewflow_cli(other, {"infer", "--model", "mlp"});
  EXPECT_EQ(swapped.code, cli::kExitParams) << swapped.err;
}

TEST_F(PipelineTest, SimulateAndReport) {
  const fs::path cfg = *ws_ / "bad.json";
  std::ofstream(cfg) << R"({"cluster": {"min_pods": 4, "max_pods": 2}})";
  const auto bad = cli_run({"simulate", "--config", cfg.string()});
  EXPECT_EQ(bad.code, cli::kExitValidation);
  EXPECT_NE(bad.err.find("cluster.min_pods"), std::string::npos) << bad.err;

  ASSERT_EQ(cli_run({"--seed", "3", "simulate"}).code, 0);
  const auto first = slurp(*ws_ / "reports/sim_curve.csv");
  ASSERT_EQ(cli_run({"--seed", "3", "simulate"}).code, 0);
  EXPECT_EQ(slurp(*ws_ / "reports/sim_curve.csv"), first);
  EXPECT_NE(slurp(*ws_ / "reports/sim_table.md").find("Cluster(Pods)"), std::string::npos);

  const fs::path run = *ws_ / "run.json";
  std::ofstream(run) << R"({"seed": 4,
    "cluster": {"min_pods": 1, "max_pods": 4, "initial_pods": 1},
    "workload": {"rate": 3, "horizon_s": 200, "mix": [{"cost": 500}]}})";
  ASSERT_EQ(cli_run({"simulate", "--config", run.string()}).code, 0);
  const auto m = nlohmann::json::parse(slurp(*ws_ / "reports/sim_metrics.json"));
  EXPECT_GT(m["max_pods_seen"].get<size_t>(), 1u);

  ASSERT_EQ(cli_run({"report"}).code, 0);
  EXPECT_TRUE(fs::exists(*ws_ / "reports/report.md"));

  bench::BenchReport fake;
  fake.scenario = "packing";
  fake.model = "logistic";
  fake.repetitions = 5;
  fake.baseline = {"baseline", {10, 11, 12, 13, 14}, 12, 1024 / 0.012, 100, 3, 1, 1024};
  fake.optimized = {"optimized", {4, 5, 6, 7, 8}, 6, 1024 / 0.006, 50, 1, 1, 1024};
  fake.ratios = bench::compute_ratios(fake.baseline, fake.optimized);
  std::ofstream(*ws_ / "reports/bench_packing.json") << bench::report_to_json(fake).dump();
  ASSERT_EQ(cli_run({"report"}).code, 0);
  fake.ratios["speedup"] = 3.0;
  std::ofstream(*ws_ / "reports/bench_packing.json") << bench::report_to_json(fake).dump();
  EXPECT_EQ(cli_run({"report"}).code, cli::kExitValidation);
  fs::remove(*ws_ / "reports/bench_packing.json");
}

// Runs last in this suite: scans everything the other commands produced.
TEST_F(PipelineTest, ZzSecretKeyNeverLeaves) {
  ASSERT_FALSE(outputs_->empty());
  const auto secret = slurp(*ws_ / "secret.bin");
  const std::string residues = secret.substr(io::kBlobHeaderBytes);
  ASSERT_GT(residues.size(), 4096u);
  std::vector<std::string> canaries;
  for (size_t off = 0; off + 32 <= residues.size(); off += residues.size() / 16) {
    canaries.push_back(residues.substr(off, 32));
  }
  auto hex = [](const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string h;
    for (unsigned char c : bytes) {
      h += digits[c >> 4];
      h += digits[c & 15];
    }
    return h;
  };
  auto clean = [&](const std::string& text, const std::string& where) {
    for (const auto& c : canaries) {
      EXPECT_EQ(text.find(c), std::string::npos) << where;
      EXPECT_EQ(text.find(hex(c)), std::string::npos) << where;
    }
  };
  for (const auto& r : *outputs_) {
    clean(r.out, "stdout");
    clean(r.err, "stderr");
  }
  size_t scanned = 0;
  for (const auto& entry : fs::recursive_directory_iterator(*ws_)) {
    if (!entry.is_regular_file() || entry.path().filename() == "secret.bin") continue;
    clean(slurp(entry.path()), entry.path().string());
    ++scanned;
  }
  EXPECT_GT(scanned, 10u);
}

// Bench --------------------------------------------------------------------

TEST(Bench, RatiosRecomputeFromRawValues) {
  bench::Measurement base{"b", {30, 10, 20, 50, 40}, 30, 1024 / 0.030, 200, 9, 1, 1024};
  bench::Measurement opt{"o", {12, 15, 14, 11, 13}, 13, 1024 / 0.013, 120, 3, 1, 1024};
  const auto r = bench::compute_ratios(base, opt);
  EXPECT_DOUBLE_EQ(r.at("speedup"), 30.0 / 13.0);
  EXPECT_DOUBLE_EQ(r.at("latency_reduction"), 1.0 - 13.0 / 30.0);
  EXPECT_DOUBLE_EQ(r.at("size_reduction"), 0.4);
  EXPECT_DOUBLE_EQ(r.at("dispatch_ratio"), 3.0 / 9.0);
  EXPECT_EQ(bench::median({3, 1, 2}), 2.0);
  EXPECT_EQ(bench::median({4, 1, 3, 2}), 2.5);
}

TEST(Bench, RunHonorsRepetitionsAndRoundTrips) {
  bench::BenchOptions o;
  o.samples = 32;
  o.repetitions = 6;
  o.warmups = 1;
  const auto report = bench::run_bench("modswitch", o);
  EXPECT_EQ(report.baseline.latency_ms.size(), 6u);
  EXPECT_EQ(report.optimized.latency_ms.size(), 6u);
  EXPECT_TRUE(bench::ratios_consistent(report));
  EXPECT_LT(report.max_output_diff, 1e-3);
  EXPECT_FALSE(report.machine.empty());
  const auto back = bench::report_from_json(bench::report_to_json(report));
  EXPECT_EQ(back.baseline.latency_ms, report.baseline.latency_ms);
  EXPECT_TRUE(bench::ratios_consistent(back));
  EXPECT_NE(bench::report_markdown({report}).find("modswitch"), std::string::npos);

  o.repetitions = 4;
  EXPECT_THROW(bench::run_bench("modswitch", o), ValidationError);
  o.repetitions = 5;
  EXPECT_THROW(bench::run_bench("teleport", o), ValidationError);
}

}  // namespace
}  // namespace hewflow
