#include "knt/rank_select.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "knt/errors.hpp"
#include "knt/rng.hpp"

namespace knt {

double alpha_schedule(int n) {
  if (n < 1) {
    fail(ErrorKind::InvalidArgument,
         "sample count must be positive, got " + std::to_string(n));
  }
  return std::exp(-0.125 * std::pow(static_cast<double>(n), 0.45));
}

RankSelectReport select_rank(const GramContext& ctx,
                             const RankSelectConfig& cfg) {
  if (cfg.r_max < 1 || cfg.r_max > ctx.n() - 1) {
    fail(ErrorKind::InvalidArgument,
         "r_max must lie in [1, n-1] with n = " + std::to_string(ctx.n()) +
             ", got " + std::to_string(cfg.r_max));
  }
  if (cfg.alpha && (!(*cfg.alpha > 0.0) || !(*cfg.alpha < 1.0))) {
    fail(ErrorKind::InvalidArgument,
         "alpha must lie strictly between 0 and 1, got " +
             std::to_string(*cfg.alpha));
  }
  if (cfg.B < 1) {
    fail(ErrorKind::InvalidArgument,
         "replication count must be at least 1, got " + std::to_string(cfg.B));
  }
  const double alpha_used =
      cfg.alpha ? *cfg.alpha : alpha_schedule(static_cast<int>(ctx.n()));

  RankSelectReport report;
  report.r_hat = cfg.r_max;
  report.accepted = false;
  for (int r = 1; r <= cfg.r_max; ++r) {
    TestConfig inner;
    inner.kernel = cfg.kernel;
    inner.model = NullModel::rank_model(r);
    inner.alpha = alpha_used;
    inner.B = cfg.B;
    // Each rank gets its own derived seed so inner bootstrap substreams never
    // collide across ranks.
    inner.seed = Rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
    inner.bootstrap_mode = cfg.bootstrap_mode;
    inner.fd_step = cfg.fd_step;
    inner.threads = cfg.threads;

    RankDecision decision;
    decision.r = r;
    decision.alpha_used = alpha_used;
    try {
      const TestReport t = run_test(ctx, inner);
      decision.statistic = t.statistic;
      decision.quantile = t.quantile;
      decision.p_value = t.p_value;
      decision.rejected = t.reject;
    } catch (const Error& e) {
      // A rank whose test cannot run is scored as rejected so the sequence
      // moves on; the trace keeps the diagnostic.
      decision.rejected = true;
      decision.warning = e.what();
      std::cerr << "warning: rank " << r
                << " test failed and was scored as rejected: " << e.what()
                << "\n";
    }
    report.trace.push_back(decision);
    if (!decision.rejected) {
      report.r_hat = r;
      report.accepted = true;
      break;
    }
  }
  return report;
}

RankSelectReport select_rank(const Dataset& data, const RankSelectConfig& cfg) {
  const GramContext ctx(data);
  return select_rank(ctx, cfg);
}

double oracle_alpha(const std::vector<Eigen::VectorXd>& null_samples,
                    const Eigen::VectorXd& observed) {
  if (static_cast<Eigen::Index>(null_samples.size()) != observed.size()) {
    fail(ErrorKind::InvalidArgument,
         "need one null sample per observed statistic, got " +
             std::to_string(null_samples.size()) + " samples and " +
             std::to_string(observed.size()) + " statistics");
  }
  double worst = 0.0;
  for (std::size_t r = 0; r < null_samples.size(); ++r) {
    const Eigen::VectorXd& sample = null_samples[r];
    if (sample.size() == 0) {
      fail(ErrorKind::InvalidArgument,
           "null sample for rank index " + std::to_string(r) + " is empty");
    }
    // Smallest level whose right-tail critical value still rejects this rank:
    // the tail mass at the observed statistic.
    const double tail =
        static_cast<double>((sample.array() >= observed(r)).count()) /
        static_cast<double>(sample.size());
    worst = std::max(worst, tail);
  }
  return worst;
}

}  // namespace knt
