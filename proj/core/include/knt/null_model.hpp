// The null family and its estimator map T.
//
// The composite null is "the sample is Gaussian with parameters in Theta_0".
// T sends arbitrary empirical parameters into Theta_0 and restricts to the
// identity on it:
//
//   full            T(m, S) = (m, S)          mean and covariance unknown
//   known           T(m, S) = (m0, S0)        both fixed in advance
//   known_mean      T(m, S) = (m0, S)         mean fixed, covariance unknown
//   rank(r)         T(m, S) = (m, S_r)        S_r = top-r spectral truncation
//
// Fixed parameters are given explicitly (vector mode) or as coefficients over
// the sample (gram mode, where no ambient coordinates exist): the mean as
// m0 = mean + sum_i a_i (Y_i - mean), the covariance as
// S0 = sum_ij C_ij (Y_i - mean)(Y_j - mean)^T.
//
// The rank-r truncation needs a strict eigengap lambda_r - lambda_{r+1} >
// 1e-10 * lambda_1: at a tie the truncation is not differentiable and the
// linearized bootstrap would be meaningless, so a diagnostic error is raised
// rather than silently perturbing the spectrum.

#pragma once

#include <Eigen/Dense>
#include <optional>

#include "knt/gram.hpp"

namespace knt {

struct NullModel {
  enum class Kind { Full, Known, KnownMean, Rank };

  Kind kind = Kind::Full;
  int rank = 0;  // Rank models only; 1 <= rank <= n-1.

  // Explicit parameters (vector-mode data only).
  std::optional<Eigen::VectorXd> mean0;
  std::optional<Eigen::MatrixXd> cov0;
  // Coefficient parameters (either mode).
  std::optional<Eigen::VectorXd> mean0_coeffs;
  std::optional<Eigen::MatrixXd> cov0_coeffs;

  static NullModel full();
  static NullModel known(Eigen::VectorXd mean, Eigen::MatrixXd cov);
  static NullModel known_mean(Eigen::VectorXd mean);
  static NullModel known_coeffs(Eigen::VectorXd mean_coeffs,
                                Eigen::MatrixXd cov_coeffs);
  static NullModel known_mean_coeffs(Eigen::VectorXd mean_coeffs);
  static NullModel rank_model(int r);
};

// Empirical parameters (mean, full covariance spectrum) of a sample; the
// argument of T before any restriction.
GaussianParam empirical_param(const GramContext& ctx);

// T applied to an arbitrary parameter.  Idempotent; identity on Theta_0.
GaussianParam apply_T(const NullModel& model, const GramContext& ctx,
                      const GaussianParam& theta);

// Fitted null parameter (m~, Sigma~) = T(empirical_param); equals apply_T on
// the empirical fit by construction.
GaussianParam fit(const NullModel& model, const GramContext& ctx);

}  // namespace knt
