// Reference multivariate normality tests: Henze-Zirkler, energy distance,
// and random projections.
//
// HZ and ED consume whitened data (empirically centered and rescaled to unit
// covariance); their critical values are calibrated by seeded Monte Carlo
// under the fitted Gaussian null, replaying the whitening step inside every
// replicate.  The random-projection test applies one-sample
// Kolmogorov-Smirnov statistics to Gaussian one-dimensional projections and
// takes the maximum over directions, again with Monte-Carlo calibration (the
// max statistic is not distribution-free for two or more directions).

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace knt {

struct WhitenedSample {
  // n x d' with empirical mean 0 and identity covariance; d' < d when null
  // directions (covariance eigenvalues below 1e-10 * max) were dropped.
  Eigen::MatrixXd data;
  Eigen::RowVectorXd center;   // empirical mean of the input
  Eigen::MatrixXd transform;   // d x d' map: whitened = (X - 1 center) * transform
  int original_dim = 0;
};

WhitenedSample whiten(const Eigen::MatrixXd& x);

// Bandwidth beta = 2^{-1/2} [ (2d+1) n / 4 ]^{1/(d+4)} of the HZ weight
// measure N(0, beta I).
double hz_beta(int n, int d);

// HZ = (1/n^2) sum_jk exp(-beta ||Y_j-Y_k||^2 / 2)
//      - 2 (1+beta)^{-d/2} (1/n) sum_j exp(-beta ||Y_j||^2 / (2(1+beta)))
//      + (1+2beta)^{-d/2},
// the closed form of the weighted L2 distance between the empirical and the
// standard normal characteristic functions; expects whitened input.
double hz_statistic(const Eigen::MatrixXd& x_whitened);

// Energy distance against the standard normal on whitened input:
// (2/n) sum_i E||Y_i - Z|| - E||Z - Z'|| - (1/n^2) sum_ij ||Y_i - Y_j||.
double ed_statistic(const Eigen::MatrixXd& x_whitened);

// E||a - Z||, Z ~ N(0, I_d), as a function of ||a||^2: confluent
// hypergeometric series (Kummer-transformed, positive terms); falls back to a
// seeded 1e6-draw Monte-Carlo mean if the series fails, with a logged
// warning.
double expected_norm_to_point(int d, double a_norm_sq);
// E||Z - Z'|| = sqrt(2) E||Z||.
double expected_norm_between(int d);

// One-sample Kolmogorov-Smirnov distance between the empirical cdf of x and
// N(mean, var).
double ks_statistic_normal(const Eigen::VectorXd& x, double mean, double var);

struct BaselineConfig {
  enum class Method { HZ, ED, RP };

  Method method = Method::HZ;
  double alpha = 0.05;
  int mc_reps = 500;  // Monte-Carlo calibration replications
  std::uint64_t seed = 0;
  int projections = 5;  // RP only
  int threads = -1;
};

struct BaselineReport {
  std::string method;
  double statistic = 0;
  double critical_value = 0;
  double p_value = 1;
  bool reject = false;
  double alpha = 0;
  int mc_reps = 0;
  std::uint64_t seed = 0;
  int projections = 0;  // RP only
  double timing_ms = 0;
};

BaselineReport run_baseline(const Eigen::MatrixXd& x,
                            const BaselineConfig& cfg);

}  // namespace knt
