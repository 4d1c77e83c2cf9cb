// The goodness-of-fit statistic and the full test procedure.
//
// The statistic is n times the squared RKHS distance between the empirical
// embedding and the embedding of the fitted null Gaussian:
//
//   n D^2 = n [ (1/n^2) sum_ij kbar(Y_i,Y_j)
//               - (2/n) sum_i N(m~,Sigma~)(Y_i) + ||N(m~,Sigma~)||^2 ].
//
// The decision compares it with the empirical (1-alpha) quantile of bootstrap
// replications: reject when statistic > quantile.

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "knt/bootstrap.hpp"
#include "knt/embedding.hpp"
#include "knt/null_model.hpp"

namespace knt {

enum class BootstrapMode { Fast, Slow, Both };

struct TestConfig {
  OuterKernel kernel;
  NullModel model;
  double alpha = 0.05;
  int B = 250;
  std::uint64_t seed = 0;
  BootstrapMode bootstrap_mode = BootstrapMode::Fast;
  double fd_step = 1e-5;
  // Worker threads for the replication loop; -1 defers to KNT_THREADS / auto.
  int threads = -1;
};

struct TestReport {
  double statistic = 0;
  double quantile = 0;
  double p_value = 1;
  bool reject = false;
  double alpha = 0;
  int B = 0;
  std::uint64_t seed = 0;
  OuterKernel kernel;
  NullModel model;
  BootstrapMode bootstrap_mode = BootstrapMode::Fast;
  // Replications behind the decision (fast ones unless mode is Slow).
  Eigen::VectorXd replications;
  // Filled in Both mode only: the classical-scheme replications, kept for
  // diagnostics; the decision always comes from `replications`.
  Eigen::VectorXd slow_replications;
  double timing_ms = 0;
};

// n D^2 for a fitted model; negative round-off beyond -1e-9 n raises a
// numerical error, tiny negatives clamp to 0.
double statistic(const GramContext& ctx, const OuterKernel& kernel,
                 const NullModel& model);
// Same, reusing a precomputed outer kernel matrix.
double statistic(const GramContext& ctx, const Eigen::MatrixXd& kbar,
                 const OuterKernel& kernel, const NullModel& model);

// Order statistic at 1-based index floor((1-alpha) B), clamped to [1, B].
double quantile(const Eigen::VectorXd& replications, double alpha);

// Add-one bootstrap p-value: (1 + #{b : rep_b >= stat}) / (B + 1).
double p_value(const Eigen::VectorXd& replications, double stat);

TestReport run_test(const Dataset& data, const TestConfig& config);
// Overload reusing an existing context (rank selection runs many tests on one
// eigendecomposition).
TestReport run_test(const GramContext& ctx, const TestConfig& config);

}  // namespace knt
