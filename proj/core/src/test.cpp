#include "knt/test.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "knt/errors.hpp"

namespace knt {

namespace {

// The statistic is a squared norm; round-off from the three-term expansion is
// allowed to dip this far (relative to n) before it counts as breakdown.
constexpr double kStatisticFloorPerN = -1e-9;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    fail(ErrorKind::InvalidArgument,
         "alpha must lie strictly between 0 and 1, got " +
             std::to_string(alpha));
  }
}

}  // namespace

double statistic(const GramContext& ctx, const Eigen::MatrixXd& kbar,
                 const OuterKernel& kernel, const NullModel& model) {
  const double nd = static_cast<double>(ctx.n());
  if (kbar.rows() != ctx.n() || kbar.cols() != ctx.n()) {
    fail(ErrorKind::InvalidArgument,
         "outer kernel matrix must be n x n with n = " +
             std::to_string(ctx.n()) + ", got " + std::to_string(kbar.rows()) +
             "x" + std::to_string(kbar.cols()));
  }
  const GaussianParam fitted = fit(model, ctx);
  const double t1 = kbar.sum() / (nd * nd);
  const double t2 = embed_eval_batch(kernel, fitted, ctx.coords()).mean();
  const double t3 = embed_norm_sq(kernel, fitted);
  double value = nd * (t1 - 2.0 * t2 + t3);
  if (value < 0.0) {
    if (value < kStatisticFloorPerN * nd) {
      fail(ErrorKind::Numerical,
           "statistic came out at " + std::to_string(value) +
               ", beyond the round-off allowance " +
               std::to_string(kStatisticFloorPerN * nd) +
               "; the embedding terms cancelled catastrophically");
    }
    value = 0.0;
  }
  return value;
}

double statistic(const GramContext& ctx, const OuterKernel& kernel,
                 const NullModel& model) {
  return statistic(ctx, outer_kernel_matrix(kernel, ctx), kernel, model);
}

double quantile(const Eigen::VectorXd& replications, double alpha) {
  if (replications.size() == 0) {
    fail(ErrorKind::InvalidArgument,
         "quantile of an empty replication vector");
  }
  check_alpha(alpha);
  const int count = static_cast<int>(replications.size());
  std::vector<double> sorted(replications.data(),
                             replications.data() + replications.size());
  std::sort(sorted.begin(), sorted.end());
  // 1-based order-statistic index floor((1-alpha) B), clamped into [1, B].
  // The small epsilon keeps exact products like 0.9 * 10 from landing one
  // below their integer value in floating point.
  int index = static_cast<int>(
      std::floor((1.0 - alpha) * static_cast<double>(count) + 1e-9));
  index = std::max(1, std::min(count, index));
  return sorted[static_cast<std::size_t>(index - 1)];
}

double p_value(const Eigen::VectorXd& replications, double stat) {
  if (replications.size() == 0) {
    fail(ErrorKind::InvalidArgument,
         "p-value of an empty replication vector");
  }
  const Eigen::Index above = (replications.array() >= stat).count();
  return (1.0 + static_cast<double>(above)) /
         (static_cast<double>(replications.size()) + 1.0);
}

TestReport run_test(const GramContext& ctx, const TestConfig& config) {
  check_alpha(config.alpha);
  if (config.B < 1) {
    fail(ErrorKind::InvalidArgument,
         "replication count must be at least 1, got " +
             std::to_string(config.B));
  }
  const auto start = std::chrono::steady_clock::now();

  const Eigen::MatrixXd kbar = outer_kernel_matrix(config.kernel, ctx);
  TestReport report;
  report.statistic = statistic(ctx, kbar, config.kernel, config.model);

  switch (config.bootstrap_mode) {
    case BootstrapMode::Fast: {
      const FastBootstrap boot(ctx, kbar, config.kernel, config.model,
                               config.fd_step);
      report.replications = boot.run(config.B, config.seed, config.threads);
      break;
    }
    case BootstrapMode::Slow: {
      const SlowBootstrap boot(ctx, config.kernel, config.model);
      report.replications = boot.run(config.B, config.seed, config.threads);
      break;
    }
    case BootstrapMode::Both: {
      const FastBootstrap fast(ctx, kbar, config.kernel, config.model,
                               config.fd_step);
      report.replications = fast.run(config.B, config.seed, config.threads);
      const SlowBootstrap slow(ctx, config.kernel, config.model);
      report.slow_replications =
          slow.run(config.B, config.seed, config.threads);
      break;
    }
  }

  report.quantile = quantile(report.replications, config.alpha);
  report.p_value = p_value(report.replications, report.statistic);
  report.reject = report.statistic > report.quantile;
  report.alpha = config.alpha;
  report.B = config.B;
  report.seed = config.seed;
  report.kernel = config.kernel;
  report.model = config.model;
  report.bootstrap_mode = config.bootstrap_mode;
  report.timing_ms =
      std::chrono::duration<double, std::milli>(
          std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

TestReport run_test(const Dataset& data, const TestConfig& config) {
  const GramContext ctx(data);
  return run_test(ctx, config);
}

}  // namespace knt
