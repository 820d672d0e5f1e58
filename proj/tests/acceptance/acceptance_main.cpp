// Copyright 2026 The hewflow Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Arguments select a subset, e.g.
// `acceptance 1 8 9`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hewflow/bench/bench.h"
#include "hewflow/bench/commands.h"
#include "hewflow/ckks/encoder.h"
#include "hewflow/ckks/encryptor.h"
#include "hewflow/ckks/evaluator.h"
#include "hewflow/common/error.h"
#include "hewflow/common/random.h"
#include "hewflow/compiler/compiler.h"
#include "hewflow/compiler/reference_models.h"
#include "hewflow/engine/engine.h"
#include "hewflow/io/blob.h"
#include "hewflow/io/csv.h"
#include "hewflow/ring/primes.h"
#include "hewflow/ring/rns_poly.h"
#include "hewflow/sim/config.h"
#include "hewflow/sim/sim.h"
#include "oracles/direct_model.h"
#include "oracles/model_oracle.h"
#include "oracles/ring_oracle.h"

namespace hewflow {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [miss]");
  }
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

// 1 ------------------------------------------------------------------------

Outcome ring_correctness() {
  using ring::Domain;
  using ring::RingParams;
  using ring::RnsPoly;
  Outcome o;
  Prng prng(101);
  auto random_vector = [&](size_t n, uint64_t q) {
    std::vector<uint64_t> v(n);
    for (auto& x : v) x = uniform_below(prng, q);
    return v;
  };
  auto load = [](const ring::RingParamsPtr& params, const std::vector<uint64_t>& v) {
    RnsPoly p(params, 1, Domain::kCoeff);
    std::copy(v.begin(), v.end(), p.limb(0).begin());
    return p;
  };

  size_t round_trips = 0, round_trip_bad = 0;
  for (size_t n : {8u, 16u, 32u, 1024u, 4096u}) {
    const auto params = RingParams::create(n, ring::primes_below(n, n < 64 ? 20 : 50, 1));
    for (int t = 0; t < 20; ++t) {
      const auto p = load(params, random_vector(n, params->modulus(0).value()));
      round_trip_bad += !(ring::ntt_inverse(ring::ntt_forward(p)) == p);
      ++round_trips;
    }
  }
  o.require(round_trip_bad == 0,
            "NTT round trip exact " + std::to_string(round_trips - round_trip_bad) + "/" +
                std::to_string(round_trips));

  size_t pairs = 0, pair_bad = 0;
  for (auto [n, q] : std::vector<std::pair<size_t, uint64_t>>{{8, 97}, {16, 97}, {32, 193}}) {
    const auto params = RingParams::create(n, {q});
    for (int t = 0; t < 200; ++t) {
      const auto a = random_vector(n, q);
      const auto b = random_vector(n, q);
      const RnsPoly c = ring::poly_mul(load(params, a), load(params, b));
      const std::vector<uint64_t> got(c.limb(0).begin(), c.limb(0).end());
      pair_bad += got != oracle::negacyclic_mul(a, b, q);
      ++pairs;
    }
  }
  o.require(pair_bad == 0, "poly_mul = schoolbook " + std::to_string(pairs - pair_bad) + "/" +
                               std::to_string(pairs));

  const size_t n = 16;
  const auto primes = ring::primes_below(n, 20, 2);
  const uint64_t q0 = primes[0], q1 = primes[1], big_q = q0 * q1;
  const auto params = RingParams::create(n, primes);
  size_t crt_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto a = random_vector(n, big_q);
    const auto b = random_vector(n, big_q);
    RnsPoly pa(params, 2, Domain::kCoeff), pb(params, 2, Domain::kCoeff);
    for (size_t j = 0; j < n; ++j) {
      pa.limb(0)[j] = a[j] % q0;
      pa.limb(1)[j] = a[j] % q1;
      pb.limb(0)[j] = b[j] % q0;
      pb.limb(1)[j] = b[j] % q1;
    }
    const auto prod = ring::poly_mul(pa, pb);
    const auto sum = ring::poly_add(pa, pb);
    const auto expect = oracle::negacyclic_mul(a, b, big_q);
    for (size_t j = 0; j < n; ++j) {
      crt_bad += oracle::crt2(prod.limb(0)[j], prod.limb(1)[j], q0, q1) != expect[j];
      crt_bad += oracle::crt2(sum.limb(0)[j], sum.limb(1)[j], q0, q1) != (a[j] + b[j]) % big_q;
    }
  }
  o.require(crt_bad == 0, "RNS/CRT mismatches " + std::to_string(crt_bad));
  return o;
}

// 2 ------------------------------------------------------------------------

Outcome scheme_homomorphism() {
  using namespace ckks;
  Outcome o;
  const auto params = SchemeParams::with_depth(2048, 2);
  const auto keys = keygen(params, 2024);
  const Encoder encoder(params);
  const Evaluator ev(params, &keys.relin);
  const size_t slots = params.slot_count();
  Prng prng(2);
  auto random_slots = [&] {
    std::vector<double> v(slots);
    for (auto& x : v) x = -10.0 + 20.0 * uniform_unit(prng);
    return v;
  };
  auto max_abs = [](const std::vector<double>& a, const std::vector<double>& b) {
    double e = 0.0;
    for (size_t i = 0; i < b.size(); ++i) e = std::max(e, std::fabs(a[i] - b[i]));
    return e;
  };
  auto relative = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double norm = 0.0;
    for (double x : b) norm = std::max(norm, std::fabs(x));
    return max_abs(a, b) / norm;
  };
  auto dec = [&](const Ciphertext& ct) {
    return encoder.decode(decrypt(params, keys.secret, ct));
  };

  double enc_err = 0, add_err = 0, mulp_err = 0, mulc_err = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto u = random_slots();
    const auto v = random_slots();
    const auto w = random_slots();
    const Ciphertext cu = encrypt(params, keys.public_key, encoder.encode(u, params.scale),
                                  derive_seed(7, 2 * t));
    const Ciphertext cv = encrypt(params, keys.public_key, encoder.encode(v, params.scale),
                                  derive_seed(7, 2 * t + 1));
    std::vector<double> sum(slots), uw(slots), uv(slots);
    for (size_t i = 0; i < slots; ++i) {
      sum[i] = u[i] + v[i];
      uw[i] = u[i] * w[i];
      uv[i] = u[i] * v[i];
    }
    enc_err = std::max(enc_err, max_abs(dec(cu), u));
    add_err = std::max(add_err, max_abs(dec(ev.add(cu, cv)), sum));
    mulp_err = std::max(
        mulp_err, relative(dec(ev.rescale(ev.mul_plain(cu, encoder.encode(w, params.scale)))), uw));
    mulc_err = std::max(mulc_err, relative(dec(ev.rescale(ev.mul(cu, cv))), uv));
  }
  o.require(enc_err < 1e-4, "enc/dec max " + fmt(enc_err, 3) + " < 1e-4");
  o.require(add_err < 2e-4, "add max " + fmt(add_err, 3) + " < 2e-4");
  o.require(mulp_err < 1e-3, "mul_plain rel " + fmt(mulp_err, 3) + " < 1e-3");
  o.require(mulc_err < 1e-2, "mul_ct+rescale rel " + fmt(mulc_err, 3) + " < 1e-2");
  return o;
}

// 3-6 ----------------------------------------------------------------------

bench::BenchReport bench_run(const std::string& scenario) {
  bench::BenchOptions options;
  options.samples = 1024;
  options.repetitions = 5;
  options.warmups = 1;
  return bench::run_bench(scenario, options);
}

std::string medians(const bench::BenchReport& r) {
  return "median " + fmt(r.baseline.median_ms) + " ms -> " + fmt(r.optimized.median_ms) +
         " ms";
}

Outcome packing_speedup() {
  Outcome o;
  const auto r = bench_run("packing");
  o.require(bench::ratios_consistent(r), "ratios consistent");
  o.require(r.ratios.at("speedup") >= 2.0,
            "speedup " + fmt(r.ratios.at("speedup"), 3) + "x >= 2.0x (" + medians(r) + ")");
  o.require(r.max_output_diff < 1e-3, "outputs agree " + fmt(r.max_output_diff, 3));
  return o;
}

Outcome modswitch_size() {
  Outcome o;
  const auto params = ckks::SchemeParams::with_depth(2048, 7);
  const auto keys = ckks::keygen(params, 5);
  const ckks::Evaluator ev(params, &keys.relin);
  const auto batch = engine::encrypt_batch({{1.0}}, 1, keys.public_key, params, 6);
  bool exact = true;
  for (size_t level = params.max_level(); level >= 1; --level) {
    const auto ct = ev.mod_switch_to(batch.cts[0], level);
    exact = exact && io::serialize(ct).size() == 53 + 2 * level * 2048 * 8;
  }
  o.require(exact, "serialized size = 53 + 2*level*n*8 at every level");

  const auto r = bench_run("modswitch");
  const double reduction = r.ratios.at("size_reduction");
  o.require(reduction >= 0.30, "avg live ciphertext " + fmt(r.baseline.avg_ciphertext_bytes) +
                                   " B -> " + fmt(r.optimized.avg_ciphertext_bytes) +
                                   " B, reduction " + fmt(100 * reduction, 3) + "% >= 30%");
  return o;
}

Outcome fusion_latency() {
  Outcome o;
  const auto r = bench_run("fusion");
  o.require(r.baseline.dispatches == 9 && r.optimized.dispatches == 3,
            "dispatches " + std::to_string(r.baseline.dispatches) + " -> " +
                std::to_string(r.optimized.dispatches) + " (9 -> 3)");
  const double red = r.ratios.at("latency_reduction");
  o.require(red >= 0.10, "latency reduction " + fmt(100 * red, 3) + "% >= 10% (" + medians(r) + ")");
  o.require(r.max_output_diff < 1e-3, "outputs agree " + fmt(r.max_output_diff, 3));
  return o;
}

Outcome end_to_end() {
  Outcome o;
  const auto r = bench_run("e2e");
  o.require(r.ratios.at("speedup") >= 2.0,
            "speedup " + fmt(r.ratios.at("speedup"), 3) + "x >= 2.0x (" + medians(r) + ")");
  o.require(r.max_output_diff < 1e-3, "outputs agree " + fmt(r.max_output_diff, 3));
  return o;
}

// 7 ------------------------------------------------------------------------

Outcome accuracy() {
  Outcome o;
  const auto params = ckks::SchemeParams::with_depth(2048, 7);
  const auto keys = ckks::keygen(params, 77);
  const engine::Engine eng(params, &keys.relin);
  for (const char* name : {"logistic", "mlp"}) {
    const auto model = compiler::reference_model(name, 1);
    const auto data = compiler::reference_dataset(name, 1024, 9);
    const auto circuit = compiler::compile(model, params, 1024);
    const auto in =
        engine::encrypt_batch(data.rows, model.input_width(), keys.public_key, params, 10);
    const auto got =
        engine::decrypt_batch(eng.execute(circuit, in).outputs, keys.secret, params);
    engine::Samples expect;
    for (const auto& row : data.rows) expect.push_back(oracle::direct_model(model, row));
    const auto dev = engine::compare_outputs(got, expect);
    o.require(dev.mean_error_over_range < 0.002 && dev.agreement >= 0.998,
              std::string(name) + ": deviation " + fmt(100 * dev.mean_error_over_range, 3) +
                  "% of range, agreement " + fmt(100 * dev.agreement, 5) + "%");
  }
  return o;
}

// 8 ------------------------------------------------------------------------

Outcome compiler_semantics() {
  using namespace compiler;
  Outcome o;
  const auto params = ckks::SchemeParams::with_depth(2048, 7);
  Prng prng(8);
  auto random_input = [&](size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = standard_normal(prng);
    return v;
  };
  double worst = 0.0;
  size_t circuits = 0;
  for (const char* name : {"logistic", "mlp", "cnn"}) {
    const auto model = reference_model(name, 3);
    std::vector<CompiledCircuit> cs;
    for (bool fuse : {false, true}) {
      for (auto mode : {RescaleMode::kEager, RescaleMode::kOff}) {
        try {
          cs.push_back(compile(model, params, 1024, {fuse, mode}));
        } catch (const DepthError&) {
          // Deep models cannot run without rescaling at this limb count.
        }
      }
    }
    circuits += cs.size();
    for (int t = 0; t < 100; ++t) {
      const auto x = random_input(model.input_width());
      const auto expect = oracle::direct_model(model, x);
      for (const auto& c : cs) {
        const auto got = oracle::interpret(c, x);
        for (size_t i = 0; i < got.size(); ++i) {
          worst = std::max(worst, std::fabs(got[i] - expect[i]));
        }
      }
    }
  }
  o.require(worst < 1e-6, std::to_string(circuits) + " circuits, max |interp - direct| " +
                              fmt(worst, 3) + " < 1e-6");

  size_t conv_bad = 0;
  for (size_t stride : {1u, 2u}) {
    Conv2DLayer conv{2, 8, 8, stride, {}, {0.25, -0.5, 1.0}};
    conv.kernels.resize(3);
    for (auto& per_out : conv.kernels) {
      for (int ic = 0; ic < 2; ++ic) {
        Matrix k(3, std::vector<double>(3));
        for (auto& row : k) {
          for (double& v : row) v = standard_normal(prng);
        }
        per_out.push_back(k);
      }
    }
    const auto d = lower_conv_to_dense(conv);
    for (int t = 0; t < 100; ++t) {
      const auto x = random_input(conv.in_dim());
      const auto expect = oracle::direct_conv(x, 2, 8, 8, stride, conv.kernels, conv.bias);
      for (size_t r = 0; r < d.out_dim(); ++r) {
        double acc = 0.0;
        for (size_t c = 0; c < d.in_dim(); ++c) acc += d.weights[r][c] * x[c];
        conv_bad += acc + d.bias[r] != expect[r];
      }
    }
  }
  o.require(conv_bad == 0, "conv lowering float-exact (" + std::to_string(conv_bad) +
                               " mismatches)");
  return o;
}

// 9 ------------------------------------------------------------------------

Outcome simulator_fidelity() {
  Outcome o;
  const double expect[4] = {128.4, 89.7, 62.3, 59.8};
  const auto spec = sim::reference_sweep();
  const auto result = sim::run_sweep(spec, 1);
  std::string rows;
  bool within = true;
  double lat[4];
  for (size_t i = 0; i < 4; ++i) {
    lat[i] = result.rows[i].metrics.mean_latency_ms;
    const double rel = std::fabs(lat[i] - expect[i]) / expect[i];
    if (i > 0) within = within && rel <= 0.15;
    rows += (i ? ", " : "") + std::to_string(result.rows[i].pods) + " pods " + fmt(lat[i]) +
            " ms (" + fmt(100 * rel, 2) + "%)";
  }
  o.require(within, rows + " within 15%");
  o.require(lat[0] > lat[1] && lat[1] > lat[2] && lat[2] > lat[3], "strictly decreasing");
  o.require(lat[0] - lat[1] > lat[1] - lat[2] && lat[1] - lat[2] > lat[2] - lat[3],
            "diminishing returns");

  sim::ClusterConfig cluster;
  cluster.min_pods = 2;
  cluster.max_pods = 8;
  const size_t desired = sim::hpa_step({0.831}, 2, cluster);
  sim::WorkloadSpec load;
  load.rate = 2 * 0.831;
  load.horizon_s = 600.0;
  load.mix = {{"inference", 1000.0, 3, 0, 1.0}};
  const auto live = sim::run_sim(cluster, load, 1);
  o.require(desired > 2 && live.max_pods_seen > 2,
            "HPA at 2 pods / 83.1% (target 70%) scales to " + std::to_string(desired) +
                ", simulated peak " + std::to_string(live.max_pods_seen) + " pods");

  const auto again = sim::run_sweep(spec, 1);
  bool same = true;
  for (size_t i = 0; i < 4; ++i) {
    same = same && again.rows[i].metrics.latencies_ms == result.rows[i].metrics.latencies_ms;
  }
  o.require(same, "deterministic under seed");
  return o;
}

// 10 -----------------------------------------------------------------------

Outcome workflow_integrity() {
  Outcome o;
  const fs::path ws = fs::temp_directory_path() / "hewflow_acceptance_ws";
  fs::remove_all(ws);
  fs::create_directories(ws);
  auto run = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"--workspace", ws.string(), "--seed", "10"});
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
  };
  const auto data = compiler::reference_dataset("logistic", 1024, 12);
  io::write_csv((ws / "data.csv").string(), {data.feature_names, data.rows});
  const bool ran = run({"keygen"}) == 0 && run({"compile", "--model", "logistic"}) == 0 &&
                   run({"encrypt", "--input", (ws / "data.csv").string()}) == 0 &&
                   run({"infer"}) == 0 && run({"decrypt"}) == 0;
  o.require(ran, "keygen/compile/encrypt/infer/decrypt through files");
  if (!ran) return o;

  const auto model = compiler::load_model((ws / "model.json").string());
  const auto pred = io::read_csv((ws / "predictions.csv").string());
  engine::Samples expect;
  for (const auto& row : data.rows) expect.push_back(oracle::direct_model(model, row));
  const auto dev = engine::compare_outputs(pred.rows, expect);
  o.require(pred.rows.size() == 1024 && dev.mean_error_over_range < 0.002 &&
                dev.agreement >= 0.998,
            "predictions vs oracle: deviation " + fmt(100 * dev.mean_error_over_range, 3) +
                "%, agreement " + fmt(100 * dev.agreement, 5) + "%");

  const auto params = io::params_from_json(
      nlohmann::json::parse(std::ifstream(ws / "params.json")));
  bool identical = true;
  for (const char* f : {"public.bin", "secret.bin", "relin.bin", "ct/batch_0/x0.hect",
                        "out/batch_0/y0.hect"}) {
    const auto bytes = io::read_file((ws / f).string());
    io::Bytes again;
    switch (io::read_header(bytes).kind) {
      case io::BlobKind::kCiphertext:
        again = io::serialize(io::parse_ciphertext(bytes, params));
        break;
      case io::BlobKind::kPublicKey:
        again = io::serialize(io::parse_public_key(bytes, params));
        break;
      case io::BlobKind::kSecretKey:
        again = io::serialize(io::parse_secret_key(bytes, params));
        break;
      case io::BlobKind::kRelinKey:
        again = io::serialize(io::parse_relin_key(bytes, params));
        break;
    }
    identical = identical && again == bytes;
  }
  o.require(identical, "key and ciphertext files re-serialize byte-identically");

  const auto other = ckks::SchemeParams::with_depth(2048, 6);
  size_t closed = 0, attempts = 0;
  for (const char* f : {"public.bin", "secret.bin", "relin.bin", "ct/batch_0/x0.hect"}) {
    const auto bytes = io::read_file((ws / f).string());
    ++attempts;
    try {
      switch (io::read_header(bytes).kind) {
        case io::BlobKind::kCiphertext:
          io::parse_ciphertext(bytes, other);
          break;
        case io::BlobKind::kPublicKey:
          io::parse_public_key(bytes, other);
          break;
        case io::BlobKind::kSecretKey:
          io::parse_secret_key(bytes, other);
          break;
        case io::BlobKind::kRelinKey:
          io::parse_relin_key(bytes, other);
          break;
      }
    } catch (const ParamsError&) {
      ++closed;
    }
    auto flipped = bytes;
    flipped[20] ^= 0x40;
    ++attempts;
    try {
      io::parse_ciphertext(flipped, params);
    } catch (const ParamsError&) {
      ++closed;
    } catch (const ValidationError&) {
      ++closed;
    }
  }
  const fs::path mixed = fs::temp_directory_path() / "hewflow_acceptance_mixed";
  fs::remove_all(mixed);
  fs::create_directories(mixed);
  {
    std::ostringstream out, err;
    cli::run_cli({"--workspace", mixed.string(), "keygen", "--depth", "6"}, out, err);
  }
  fs::copy(ws / "ct", mixed / "ct", fs::copy_options::recursive);
  ++attempts;
  {
    std::ostringstream out, err;
    if (cli::run_cli({"--workspace", mixed.string(), "infer", "--model", "logistic"}, out,
                     err) == cli::kExitParams) {
      ++closed;
    }
  }
  o.require(closed == attempts, "cross-params and tampered inputs rejected " +
                                    std::to_string(closed) + "/" + std::to_string(attempts));
  fs::remove_all(mixed);
  fs::remove_all(ws);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace hewflow

int main(int argc, char** argv) {
  using namespace hewflow;
  const std::vector<Criterion> criteria = {
      {1, "ring correctness", 10, ring_correctness},
      {2, "scheme homomorphism", 120, scheme_homomorphism},
      {3, "packing speedup", 300, packing_speedup},
      {4, "modulus-switching size reduction", 60, modswitch_size},
      {5, "operator fusion", 300, fusion_latency},
      {6, "end-to-end optimized vs baseline", 600, end_to_end},
      {7, "accuracy fidelity", 300, accuracy},
      {8, "compiler semantics", 30, compiler_semantics},
      {9, "simulator fidelity", 30, simulator_fidelity},
      {10, "workflow integrity", 120, workflow_integrity},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    o.require(secs < c.budget_s, "runtime " + fmt(secs, 3) + " s < " + fmt(c.budget_s) + " s");
    failures += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
