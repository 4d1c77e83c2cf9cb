// Sequential covariance-rank selection.
//
// For r = 1, 2, ..., r_max test the null "Gaussian with covariance of rank r"
// and stop at the first acceptance; if every rank is rejected the estimate is
// r_max.  Because the true-rank hypothesis is reached only after all smaller
// ranks were rejected, a union bound gives P(r^ > r*) <= alpha.  The level may
// be fixed or follow the decreasing schedule alpha_n = exp(-0.125 n^0.45).
//
// All inner tests share one GramContext (a single eigendecomposition); a rank
// whose inner test fails to run (e.g. an eigengap tie at the truncation
// boundary) counts as rejected and carries the diagnostic in its trace entry.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knt/test.hpp"

namespace knt {

struct RankSelectConfig {
  int r_max = 10;
  // Fixed level; empty means the alpha_n schedule.
  std::optional<double> alpha;
  OuterKernel kernel;
  int B = 250;
  std::uint64_t seed = 0;
  BootstrapMode bootstrap_mode = BootstrapMode::Fast;
  double fd_step = 1e-5;
  int threads = -1;
};

struct RankDecision {
  int r = 0;
  double alpha_used = 0;
  double statistic = 0;
  double quantile = 0;
  double p_value = 0;
  bool rejected = false;
  // Non-empty when the inner test errored and the rank was scored as
  // rejected.
  std::string warning;
};

struct RankSelectReport {
  int r_hat = 0;
  // True when r_hat was accepted (false: every rank rejected, r_hat = r_max).
  bool accepted = false;
  std::vector<RankDecision> trace;
};

// alpha_n = exp(-0.125 n^0.45), strictly decreasing in n.
double alpha_schedule(int n);

RankSelectReport select_rank(const Dataset& data, const RankSelectConfig& cfg);
RankSelectReport select_rank(const GramContext& ctx,
                             const RankSelectConfig& cfg);

// Benchmark-harness oracle level: given per-rank null samples Z_r and
// observed statistics for the ranks below the true one, the smallest level
// that rejects them all, i.e. max_r #{Z_r >= observed_r} / |Z_r|.
double oracle_alpha(const std::vector<Eigen::VectorXd>& null_samples,
                    const Eigen::VectorXd& observed);

}  // namespace knt
