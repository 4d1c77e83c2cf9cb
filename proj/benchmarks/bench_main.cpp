// Micro-benchmarks for the hot paths: context construction, the statistic,
// and one replication batch of each bootstrap scheme.  The headline numbers
// are the fast-vs-slow bootstrap pair at growing n (the complexity gap) —
// `knt bench` reports the same comparison end to end.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "knt/baselines.hpp"
#include "knt/bootstrap.hpp"
#include "knt/embedding.hpp"
#include "knt/gram.hpp"
#include "knt/null_model.hpp"
#include "knt/synthdata.hpp"
#include "knt/test.hpp"

namespace {

Eigen::MatrixXd data_for(int n, int d) {
  knt::Scenario sc;
  sc.kind = knt::Scenario::Kind::NullGaussian;
  sc.n = n;
  sc.d = d;
  return knt::generate(sc, 17);
}

void BM_GramContextFromVectors(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = data_for(n, 5);
  for (auto _ : state) {
    knt::GramContext ctx(knt::Dataset::vectors(x));
    benchmark::DoNotOptimize(ctx.eigenvalues());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_GramContextFromVectors)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void BM_Statistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = data_for(n, 5);
  const knt::GramContext ctx(knt::Dataset::vectors(x));
  const knt::OuterKernel kernel = knt::OuterKernel::gaussian(0.5);
  const Eigen::MatrixXd kbar = knt::outer_kernel_matrix(kernel, ctx);
  const knt::NullModel model = knt::NullModel::full();
  for (auto _ : state) {
    benchmark::DoNotOptimize(knt::statistic(ctx, kbar, kernel, model));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Statistic)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void BM_FastBootstrap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = data_for(n, 2);
  const knt::GramContext ctx(knt::Dataset::vectors(x));
  const knt::OuterKernel kernel = knt::OuterKernel::gaussian(1.0);
  const Eigen::MatrixXd kbar = knt::outer_kernel_matrix(kernel, ctx);
  const knt::FastBootstrap fast(ctx, kbar, kernel, knt::NullModel::full(),
                                1e-5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fast.run(25, 3, 1));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_FastBootstrap)->Arg(100)->Arg(200)->Arg(400)->Arg(800)
    ->Complexity()->Unit(benchmark::kMillisecond);

void BM_SlowBootstrap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = data_for(n, 2);
  const knt::GramContext ctx(knt::Dataset::vectors(x));
  const knt::OuterKernel kernel = knt::OuterKernel::gaussian(1.0);
  const knt::SlowBootstrap slow(ctx, kernel, knt::NullModel::full());
  for (auto _ : state) {
    benchmark::DoNotOptimize(slow.run(25, 3, 1));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_SlowBootstrap)->Arg(100)->Arg(200)->Arg(400)->Arg(800)
    ->Complexity()->Unit(benchmark::kMillisecond);

void BM_BaselineHz(benchmark::State& state) {
  const Eigen::MatrixXd x = data_for(static_cast<int>(state.range(0)), 3);
  knt::BaselineConfig cfg;
  cfg.method = knt::BaselineConfig::Method::HZ;
  cfg.mc_reps = 100;
  for (auto _ : state) {
    benchmark::DoNotOptimize(knt::run_baseline(x, cfg).p_value);
  }
}
BENCHMARK(BM_BaselineHz)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_MedianHeuristic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const knt::GramContext ctx(knt::Dataset::vectors(data_for(n, 5)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(knt::median_heuristic_sigma(ctx));
  }
}
BENCHMARK(BM_MedianHeuristic)->Arg(200)->Arg(800);

}  // namespace

BENCHMARK_MAIN();
