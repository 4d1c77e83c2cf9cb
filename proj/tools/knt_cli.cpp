// Command-line front end for the kernel normality test library.
//
// Subcommands:
//   test      one-sample Gaussianity test on a CSV sample
//   rank      sequential covariance-rank selection
//   baseline  Henze-Zirkler / energy-distance / random-projection tests
//   simulate  synthetic scenario generation to CSV
//   bench     fast-vs-slow bootstrap timing and distribution comparison
//
// Reports are JSON (stdout or --output); parsing an emitted report and
// re-serializing it reproduces the bytes exactly.  Exit codes for `test`:
// 0 accept, 1 reject, 2 error; other subcommands exit 0 on success, 2 on
// error.  Worker-thread count is taken from the KNT_THREADS environment
// variable (0 or unset = one per core).

#include <CLI11.hpp>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "knt/baselines.hpp"
#include "knt/bootstrap.hpp"
#include "knt/embedding.hpp"
#include "knt/errors.hpp"
#include "knt/gram.hpp"
#include "knt/io.hpp"
#include "knt/null_model.hpp"
#include "knt/rank_select.hpp"
#include "knt/rng.hpp"
#include "knt/stats_util.hpp"
#include "knt/synthdata.hpp"
#include "knt/test.hpp"

namespace {

using json = nlohmann::ordered_json;  // preserves insertion order on parse too

// ---------------------------------------------------------------------------
// Shared flag bundles

struct DataFlags {
  std::string input;
  std::string mode = "vectors";
};

struct KernelFlags {
  std::string kernel = "gaussian";
  std::optional<double> sigma;
};

struct ModelFlags {
  std::string null_model = "full";
  std::string params_path;
};

void add_data_flags(CLI::App* cmd, DataFlags* f) {
  cmd->add_option("input", f->input, "input CSV (auto-detected header row)")
      ->required();
  cmd->add_option("--mode", f->mode,
                  "how to read the CSV: one observation per row, or a square "
                  "matrix of pairwise inner products")
      ->check(CLI::IsMember({"vectors", "gram"}));
}

void add_kernel_flags(CLI::App* cmd, KernelFlags* f) {
  cmd->add_option("--kernel", f->kernel, "outer RKHS kernel")
      ->check(CLI::IsMember({"gaussian", "exponential"}));
  cmd->add_option("--sigma", f->sigma,
                  "gaussian kernel bandwidth; default 1/(2 median of pairwise "
                  "squared distances)");
}

void add_model_flags(CLI::App* cmd, ModelFlags* f) {
  cmd->add_option("--null-model", f->null_model,
                  "null family: full | known | known-mean | rank:R");
  cmd->add_option("--params", f->params_path,
                  "JSON file with the fixed parameters of a known/known-mean "
                  "model: {\"mean\": [...], \"covariance\": [[...]]} "
                  "(in gram mode, coefficients over the centered sample)");
}

// ---------------------------------------------------------------------------
// Flag materialization

knt::Dataset load_dataset(const DataFlags& f) {
  Eigen::MatrixXd x = knt::read_csv_matrix(f.input);
  return f.mode == "gram" ? knt::Dataset::gram(std::move(x))
                          : knt::Dataset::vectors(std::move(x));
}

// Median heuristic only when --sigma was not given; --sigma with the
// exponential kernel is rejected rather than ignored.
knt::OuterKernel make_kernel(const KernelFlags& f, const knt::GramContext& ctx) {
  if (f.kernel == "exponential") {
    if (f.sigma)
      knt::fail(knt::ErrorKind::InvalidArgument,
                "--sigma applies to the gaussian kernel only");
    return knt::OuterKernel::exponential();
  }
  return knt::OuterKernel::gaussian(f.sigma ? *f.sigma
                                            : knt::median_heuristic_sigma(ctx));
}

Eigen::VectorXd json_vector(const json& j, const std::string& what) {
  if (!j.is_array())
    knt::fail(knt::ErrorKind::InvalidArgument,
              "params field '" + what + "' must be a numeric array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      knt::fail(knt::ErrorKind::InvalidArgument,
                "params field '" + what + "' must be a numeric array");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd json_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    knt::fail(knt::ErrorKind::InvalidArgument,
              "params field '" + what + "' must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd m(j.size(), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      knt::fail(knt::ErrorKind::InvalidArgument,
                "params field '" + what + "' must be rectangular");
    for (std::size_t k = 0; k < cols; ++k) {
      if (!j[i][k].is_number())
        knt::fail(knt::ErrorKind::InvalidArgument,
                  "params field '" + what + "' must be numeric");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          j[i][k].get<double>();
    }
  }
  return m;
}

json load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) knt::fail(knt::ErrorKind::Io, "cannot open params file " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded())
    knt::fail(knt::ErrorKind::Io, "params file " + path + " is not valid JSON");
  return j;
}

knt::NullModel make_model(const ModelFlags& f, bool gram_mode) {
  const std::string& s = f.null_model;
  const bool known = s == "known";
  const bool known_mean = s == "known-mean";
  if (!known && !known_mean && !f.params_path.empty())
    knt::fail(knt::ErrorKind::InvalidArgument,
              "--params is only meaningful with --null-model known or "
              "known-mean");
  if (s == "full") return knt::NullModel::full();
  if (s.rfind("rank:", 0) == 0) {
    int r = 0;
    try {
      std::size_t used = 0;
      r = std::stoi(s.substr(5), &used);
      if (used != s.size() - 5) r = 0;
    } catch (const std::exception&) {
      r = 0;
    }
    if (r < 1)
      knt::fail(knt::ErrorKind::InvalidArgument,
                "rank model needs a positive integer rank, got '" + s + "'");
    return knt::NullModel::rank_model(r);
  }
  if (!known && !known_mean)
    knt::fail(knt::ErrorKind::InvalidArgument,
              "unknown null model '" + s +
                  "' (expected full, known, known-mean, or rank:R)");
  if (f.params_path.empty())
    knt::fail(knt::ErrorKind::InvalidArgument,
              "--null-model " + s + " requires --params");
  const json params = load_params_file(f.params_path);
  if (!params.contains("mean"))
    knt::fail(knt::ErrorKind::InvalidArgument,
              "params file must contain a \"mean\" array");
  Eigen::VectorXd mean = json_vector(params["mean"], "mean");
  if (known_mean)
    return gram_mode ? knt::NullModel::known_mean_coeffs(std::move(mean))
                     : knt::NullModel::known_mean(std::move(mean));
  if (!params.contains("covariance"))
    knt::fail(knt::ErrorKind::InvalidArgument,
              "params file must contain a \"covariance\" matrix for a fully "
              "known model");
  Eigen::MatrixXd cov = json_matrix(params["covariance"], "covariance");
  return gram_mode
             ? knt::NullModel::known_coeffs(std::move(mean), std::move(cov))
             : knt::NullModel::known(std::move(mean), std::move(cov));
}

knt::BootstrapMode parse_bootstrap(const std::string& s) {
  if (s == "fast") return knt::BootstrapMode::Fast;
  if (s == "slow") return knt::BootstrapMode::Slow;
  return knt::BootstrapMode::Both;
}

// ---------------------------------------------------------------------------
// JSON emission

json kernel_json(const knt::OuterKernel& k) {
  json j;
  if (k.kind == knt::OuterKernel::Kind::Gaussian) {
    j["kind"] = "gaussian";
    j["sigma"] = k.sigma;
  } else {
    j["kind"] = "exponential";
  }
  return j;
}

json model_json(const knt::NullModel& m) {
  json j;
  switch (m.kind) {
    case knt::NullModel::Kind::Full:
      j["kind"] = "full";
      break;
    case knt::NullModel::Kind::Known:
      j["kind"] = "known";
      break;
    case knt::NullModel::Kind::KnownMean:
      j["kind"] = "known-mean";
      break;
    case knt::NullModel::Kind::Rank:
      j["kind"] = "rank";
      j["r"] = m.rank;
      break;
  }
  return j;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void emit(const json& j, const std::string& output_path) {
  const std::string text = j.dump(2) + "\n";
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) knt::fail(knt::ErrorKind::Io, "cannot open " + output_path);
  out << text;
  if (!out) knt::fail(knt::ErrorKind::Io, "write failed: " + output_path);
}

const char* bootstrap_name(knt::BootstrapMode m) {
  switch (m) {
    case knt::BootstrapMode::Fast: return "fast";
    case knt::BootstrapMode::Slow: return "slow";
    default: return "both";
  }
}

// ---------------------------------------------------------------------------
// Subcommands

struct TestFlags {
  DataFlags data;
  KernelFlags kernel;
  ModelFlags model;
  double alpha = 0.05;
  int B = 250;
  std::uint64_t seed = 0;
  std::string bootstrap = "fast";
  std::string output;
  bool emit_replications = false;
};

int cmd_test(const TestFlags& f) {
  const knt::Dataset data = load_dataset(f.data);
  const knt::GramContext ctx(data);
  knt::TestConfig cfg;
  cfg.kernel = make_kernel(f.kernel, ctx);
  cfg.model = make_model(f.model, !ctx.vectors_mode());
  cfg.alpha = f.alpha;
  cfg.B = f.B;
  cfg.seed = f.seed;
  cfg.bootstrap_mode = parse_bootstrap(f.bootstrap);

  const knt::TestReport rep = knt::run_test(ctx, cfg);

  json j;
  j["statistic"] = rep.statistic;
  j["quantile"] = rep.quantile;
  j["p_value"] = rep.p_value;
  j["reject"] = rep.reject;
  j["alpha"] = rep.alpha;
  j["B"] = rep.B;
  j["seed"] = rep.seed;
  j["kernel"] = kernel_json(rep.kernel);
  j["model"] = model_json(rep.model);
  j["timing_ms"] = rep.timing_ms;
  if (f.emit_replications) j["replications"] = vector_json(rep.replications);
  emit(j, f.output);
  return rep.reject ? 1 : 0;
}

struct RankFlags {
  DataFlags data;
  KernelFlags kernel;
  int r_max = 10;
  std::optional<double> alpha;
  bool alpha_schedule = false;
  int B = 250;
  std::uint64_t seed = 0;
  std::string bootstrap = "fast";
  std::string output;
};

int cmd_rank(const RankFlags& f) {
  const auto start = std::chrono::steady_clock::now();
  const knt::Dataset data = load_dataset(f.data);
  const knt::GramContext ctx(data);
  knt::RankSelectConfig cfg;
  cfg.r_max = f.r_max;
  cfg.alpha = f.alpha;  // empty selects the alpha_n schedule
  cfg.kernel = make_kernel(f.kernel, ctx);
  cfg.B = f.B;
  cfg.seed = f.seed;
  cfg.bootstrap_mode = parse_bootstrap(f.bootstrap);

  const knt::RankSelectReport rep = knt::select_rank(ctx, cfg);
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();

  json j;
  j["r_hat"] = rep.r_hat;
  j["accepted"] = rep.accepted;
  j["alpha_schedule"] = !f.alpha.has_value();
  if (f.alpha) j["alpha"] = *f.alpha;
  j["r_max"] = f.r_max;
  j["B"] = f.B;
  j["seed"] = f.seed;
  j["kernel"] = kernel_json(cfg.kernel);
  json trace = json::array();
  for (const knt::RankDecision& d : rep.trace) {
    json t;
    t["r"] = d.r;
    t["alpha"] = d.alpha_used;
    t["statistic"] = d.statistic;
    t["quantile"] = d.quantile;
    t["p_value"] = d.p_value;
    t["rejected"] = d.rejected;
    if (!d.warning.empty()) t["warning"] = d.warning;
    trace.push_back(std::move(t));
  }
  j["trace"] = std::move(trace);
  j["timing_ms"] = ms;
  emit(j, f.output);
  return 0;
}

struct BaselineFlags {
  DataFlags data;
  std::string method;
  double alpha = 0.05;
  int mc_reps = 500;
  std::uint64_t seed = 0;
  std::optional<int> projections;
  std::string output;
};

int cmd_baseline(const BaselineFlags& f) {
  if (f.data.mode == "gram")
    knt::fail(knt::ErrorKind::InvalidArgument,
              "baseline tests need explicit observations (--mode vectors)");
  const knt::Dataset data = load_dataset(f.data);
  knt::BaselineConfig cfg;
  if (f.method == "hz")
    cfg.method = knt::BaselineConfig::Method::HZ;
  else if (f.method == "ed")
    cfg.method = knt::BaselineConfig::Method::ED;
  else
    cfg.method = knt::BaselineConfig::Method::RP;
  if (f.projections && f.method != "rp")
    knt::fail(knt::ErrorKind::InvalidArgument,
              "--projections applies to --method rp only");
  cfg.alpha = f.alpha;
  cfg.mc_reps = f.mc_reps;
  cfg.seed = f.seed;
  if (f.projections) cfg.projections = *f.projections;

  const knt::BaselineReport rep = knt::run_baseline(data.data, cfg);

  json j;
  j["method"] = f.method;
  j["statistic"] = rep.statistic;
  j["critical_value"] = rep.critical_value;
  j["p_value"] = rep.p_value;
  j["reject"] = rep.reject;
  j["alpha"] = rep.alpha;
  j["mc_reps"] = rep.mc_reps;
  j["seed"] = rep.seed;
  if (f.method == "rp") j["projections"] = rep.projections;
  j["timing_ms"] = rep.timing_ms;
  emit(j, f.output);
  return 0;
}

struct SimulateFlags {
  std::string scenario = "null";
  std::string config_path;
  int d = 2;
  int n = 100;
  std::string decay = "exp";
  int r_star = 10;
  double rho = 8.0;
  std::uint64_t seed = 0;
  std::string output;
};

knt::Scenario make_scenario(const SimulateFlags& f, const CLI::App* cmd) {
  knt::Scenario sc;
  // A config file seeds the scenario; explicitly passed flags override it.
  json cfg;
  if (!f.config_path.empty()) cfg = load_params_file(f.config_path);
  const auto field = [&](const char* name, const CLI::App* c,
                         const std::string& flag) -> const json* {
    if (c->count(flag) > 0) return nullptr;  // flag wins
    auto it = cfg.find(name);
    return it != cfg.end() ? &*it : nullptr;
  };

  std::string scenario = f.scenario;
  if (const json* v = field("scenario", cmd, "--scenario"))
    scenario = v->get<std::string>();
  std::string decay = f.decay;
  if (const json* v = field("decay", cmd, "--decay"))
    decay = v->get<std::string>();
  const auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(c));
    return s;
  };
  scenario = lower(scenario);
  decay = lower(decay);

  if (scenario == "null")
    sc.kind = knt::Scenario::Kind::NullGaussian;
  else if (scenario == "ha1")
    sc.kind = knt::Scenario::Kind::MixtureHA1;
  else if (scenario == "ha2")
    sc.kind = knt::Scenario::Kind::MixtureHA2;
  else if (scenario == "lowrank")
    sc.kind = knt::Scenario::Kind::Lowrank;
  else if (scenario == "lowrank-noisy")
    sc.kind = knt::Scenario::Kind::LowrankNoisy;
  else
    knt::fail(knt::ErrorKind::InvalidArgument,
              "unknown scenario '" + scenario +
                  "' (expected null, ha1, ha2, lowrank, or lowrank-noisy)");
  if (decay == "poly")
    sc.decay = knt::Scenario::Decay::Poly;
  else if (decay == "exp")
    sc.decay = knt::Scenario::Decay::Exp;
  else
    knt::fail(knt::ErrorKind::InvalidArgument,
              "unknown decay '" + decay + "' (expected poly or exp)");

  sc.d = f.d;
  sc.n = f.n;
  sc.r_star = f.r_star;
  sc.rho = f.rho;
  if (const json* v = field("d", cmd, "--d")) sc.d = v->get<int>();
  if (const json* v = field("n", cmd, "--n")) sc.n = v->get<int>();
  if (const json* v = field("r_star", cmd, "--r-star"))
    sc.r_star = v->get<int>();
  if (const json* v = field("rho", cmd, "--rho")) sc.rho = v->get<double>();
  return sc;
}

int cmd_simulate(const SimulateFlags& f, const CLI::App* cmd,
                 std::uint64_t seed_from_cfg_or_flag) {
  const knt::Scenario sc = make_scenario(f, cmd);
  const Eigen::MatrixXd x = knt::generate(sc, seed_from_cfg_or_flag);
  knt::write_csv_matrix(f.output.empty() ? "/dev/stdout" : f.output, x);
  return 0;
}

struct BenchFlags {
  std::string input;  // optional: benchmark this dataset instead of simulating
  KernelFlags kernel;
  ModelFlags model;
  std::vector<int> sizes = {200, 400, 800};
  int d = 2;
  int B = 250;
  std::uint64_t seed = 0;
  std::string output;
};

json bench_one(const Eigen::MatrixXd& x, const BenchFlags& f,
               std::uint64_t seed) {
  const knt::GramContext ctx(knt::Dataset::vectors(x));
  const knt::OuterKernel kernel = make_kernel(f.kernel, ctx);
  const knt::NullModel model = make_model(f.model, false);
  const Eigen::MatrixXd kbar = knt::outer_kernel_matrix(kernel, ctx);

  const knt::FastBootstrap fast(ctx, kbar, kernel, model, /*fd_step=*/1e-5);
  auto t0 = std::chrono::steady_clock::now();
  const Eigen::VectorXd fast_reps = fast.run(f.B, seed, /*threads=*/-1);
  auto t1 = std::chrono::steady_clock::now();
  const knt::SlowBootstrap slow(ctx, kernel, model);
  auto t2 = std::chrono::steady_clock::now();
  const Eigen::VectorXd slow_reps = slow.run(f.B, seed, /*threads=*/-1);
  auto t3 = std::chrono::steady_clock::now();

  const double fast_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  const double slow_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
  const double ks = knt::two_sample_ks_statistic(fast_reps, slow_reps);

  json e;
  e["n"] = static_cast<int>(x.rows());
  e["kernel"] = kernel_json(kernel);
  e["fast_ms"] = fast_ms;
  e["slow_ms"] = slow_ms;
  e["time_ratio"] = slow_ms / fast_ms;
  e["ks_statistic"] = ks;
  e["ks_p_value"] = knt::two_sample_ks_pvalue(ks, f.B, f.B);
  return e;
}

int cmd_bench(const BenchFlags& f) {
  json results = json::array();
  if (!f.input.empty()) {
    DataFlags df;
    df.input = f.input;
    results.push_back(bench_one(load_dataset(df).data, f, f.seed));
  } else {
    for (int n : f.sizes) {
      knt::Scenario sc;
      sc.kind = knt::Scenario::Kind::NullGaussian;
      sc.d = f.d;
      sc.n = n;
      const std::uint64_t seed =
          knt::Rng::derive_seed(f.seed, static_cast<std::uint64_t>(n));
      results.push_back(bench_one(knt::generate(sc, seed), f, seed));
    }
  }
  json j;
  j["B"] = f.B;
  j["seed"] = f.seed;
  j["model"] = model_json(make_model(f.model, false));
  j["results"] = std::move(results);
  emit(j, f.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel-based one-sample normality testing"};
  app.require_subcommand(1);

  TestFlags tf;
  CLI::App* test = app.add_subcommand(
      "test", "test a sample for Gaussianity (exit 0 accept, 1 reject)");
  add_data_flags(test, &tf.data);
  add_kernel_flags(test, &tf.kernel);
  add_model_flags(test, &tf.model);
  test->add_option("--alpha", tf.alpha, "test level")
      ->check(CLI::Range(0.0, 1.0));
  test->add_option("--B", tf.B, "bootstrap replications");
  test->add_option("--seed", tf.seed, "RNG seed");
  test->add_option("--bootstrap", tf.bootstrap, "replication scheme")
      ->check(CLI::IsMember({"fast", "slow", "both"}));
  test->add_option("--output", tf.output, "write the JSON report here");
  test->add_flag("--emit-replications", tf.emit_replications,
                 "include the bootstrap replications in the report");

  RankFlags rf;
  CLI::App* rank = app.add_subcommand(
      "rank", "select the covariance rank by sequential testing");
  add_data_flags(rank, &rf.data);
  add_kernel_flags(rank, &rf.kernel);
  rank->add_option("--r-max", rf.r_max, "largest candidate rank");
  CLI::Option* fixed_alpha =
      rank->add_option("--alpha", rf.alpha, "fixed per-rank level")
          ->check(CLI::Range(0.0, 1.0));
  rank->add_flag("--alpha-schedule", rf.alpha_schedule,
                 "use the decreasing level exp(-0.125 n^0.45) (the default)")
      ->excludes(fixed_alpha);
  rank->add_option("--B", rf.B, "bootstrap replications per rank");
  rank->add_option("--seed", rf.seed, "RNG seed");
  rank->add_option("--bootstrap", rf.bootstrap, "replication scheme")
      ->check(CLI::IsMember({"fast", "slow", "both"}));
  rank->add_option("--output", rf.output, "write the JSON report here");

  BaselineFlags bf;
  CLI::App* baseline = app.add_subcommand(
      "baseline", "run a classical multivariate normality test");
  add_data_flags(baseline, &bf.data);
  baseline->add_option("--method", bf.method, "hz | ed | rp")
      ->check(CLI::IsMember({"hz", "ed", "rp"}))
      ->required();
  baseline->add_option("--alpha", bf.alpha, "test level")
      ->check(CLI::Range(0.0, 1.0));
  baseline->add_option("--mc-reps", bf.mc_reps,
                       "Monte-Carlo calibration replications");
  baseline->add_option("--seed", bf.seed, "RNG seed");
  baseline->add_option("--projections", bf.projections,
                       "random directions (rp only)");
  baseline->add_option("--output", bf.output, "write the JSON report here");

  SimulateFlags sf;
  CLI::App* simulate =
      app.add_subcommand("simulate", "generate a synthetic scenario as CSV");
  simulate->add_option("--scenario", sf.scenario,
                       "null | ha1 | ha2 | lowrank | lowrank-noisy");
  simulate->add_option("--config", sf.config_path,
                       "scenario config JSON; explicit flags override it");
  simulate->add_option("--d", sf.d, "ambient dimension");
  simulate->add_option("--n", sf.n, "sample size");
  simulate->add_option("--decay", sf.decay,
                       "low-rank eigenvalue profile: poly | exp");
  simulate->add_option("--r-star", sf.r_star, "signal rank (low-rank only)");
  simulate->add_option("--rho", sf.rho,
                       "signal-to-noise ratio (lowrank-noisy only)");
  simulate->add_option("--seed", sf.seed, "RNG seed");
  simulate->add_option("--output", sf.output, "CSV path (default: stdout)");

  BenchFlags ff;
  CLI::App* bench = app.add_subcommand(
      "bench", "compare fast and classical bootstrap timing/distribution");
  bench->add_option("input", ff.input,
                    "optional CSV to benchmark (default: simulated N(0, I_d))");
  add_kernel_flags(bench, &ff.kernel);
  add_model_flags(bench, &ff.model);
  bench->add_option("--n", ff.sizes, "sample sizes for simulated data");
  bench->add_option("--d", ff.d, "dimension of simulated data");
  bench->add_option("--B", ff.B, "bootstrap replications");
  bench->add_option("--seed", ff.seed, "RNG seed");
  bench->add_option("--output", ff.output, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (test->parsed()) return cmd_test(tf);
    if (rank->parsed()) return cmd_rank(rf);
    if (baseline->parsed()) return cmd_baseline(bf);
    if (simulate->parsed()) {
      std::uint64_t seed = sf.seed;
      if (!sf.config_path.empty() && simulate->count("--seed") == 0) {
        const json cfg = load_params_file(sf.config_path);
        if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();
      }
      return cmd_simulate(sf, simulate, seed);
    }
    return cmd_bench(ff);
  } catch (const knt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
