// The two bootstrap schemes estimating the null distribution of the test
// statistic.
//
// Fast (multiplier) scheme, O(n^2) per replication: draw i.i.d. standard
// normal weights Z_i, center them (w_i = Z_i - Zbar), form the weighted
// empirical element mu_b = (1/n) sum_i w_i phi(Y_i) and the weighted parameter
// perturbation delta_b = (m_b, S_b) with
//   m_b = (1/n) sum_i w_i Y_i,
//   S_b = (1/n) sum_i w_i (Y_i - m_b)(Y_i - m_b)^T,
// then evaluate n ||mu_b - D[delta_b]||^2 where D is the derivative of the
// composed map N o T at the empirical parameter, realized by a central finite
// difference through the closed-form embeddings.
//
// Classical (slow) scheme, O(n^3) per replication: sample a fresh n-point
// replicate from the fitted null N(m~, Sigma~), rebuild its Gram matrix,
// re-fit the null parameters through the full centered-Gram eigendecomposition
// (the cubic step), and recompute the statistic on the replicate.
//
// Replication b of either scheme draws from an RNG substream derived from
// (seed, b) alone, so results are independent of thread count and schedule.

#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "knt/embedding.hpp"
#include "knt/null_model.hpp"
#include "knt/rng.hpp"

namespace knt {

// A tangent direction (dm, dS) at a Gaussian parameter, with dS dense
// symmetric (bootstrap covariance perturbations are indefinite in general).
struct ParamPerturbation {
  Eigen::VectorXd dmean;
  Eigen::MatrixXd dcov;
};

// Parameter-space norms used to scale the finite-difference step:
// ||(m, S)|| = sqrt(||m||^2 + ||S||_F^2).
double theta_norm(const GaussianParam& param);
double perturbation_norm(const ParamPerturbation& delta);

// The linearized embedding element D ~ D_theta(N o T)[delta], represented by
// its two endpoint embeddings N(T(theta + tau delta)) and N(T(theta - tau
// delta)); evaluation and norms expand through the closed forms.  delta = 0
// yields the exact zero element.
class LinearizedEmbedding {
 public:
  static LinearizedEmbedding zero();
  LinearizedEmbedding(GaussianParam plus, GaussianParam minus, double tau);

  bool is_zero() const { return zero_; }
  // D(y) = (N_+(y) - N_-(y)) / (2 tau).
  double eval(const OuterKernel& kernel, const Eigen::VectorXd& y) const;
  Eigen::VectorXd eval_batch(const OuterKernel& kernel,
                             const Eigen::MatrixXd& pts) const;
  // ||D||^2 = (||N_+||^2 - 2<N_+,N_-> + ||N_-||^2) / (4 tau^2).
  double norm_sq(const OuterKernel& kernel) const;

 private:
  LinearizedEmbedding() : zero_(true), tau_(0) {}

  bool zero_;
  GaussianParam plus_, minus_;
  double tau_;
};

// Central finite difference of N o T at theta_hat in direction delta.  The
// actual step is tau = h * ||theta_hat|| / ||delta||, so h is a relative step
// size (default 1e-5 in TestConfig).  Errors from invalid perturbed
// parameters (eigengap ties, exponential-kernel spectra reaching 1) propagate
// with a suggestion to reduce h.
LinearizedEmbedding frechet_fd(const OuterKernel& kernel,
                               const NullModel& model, const GramContext& ctx,
                               const GaussianParam& theta_hat,
                               const ParamPerturbation& delta, double h);

class FastBootstrap {
 public:
  // kbar must be outer_kernel_matrix(kernel, ctx); it is shared, immutable.
  FastBootstrap(const GramContext& ctx, const Eigen::MatrixXd& kbar,
                const OuterKernel& kernel, const NullModel& model,
                double fd_step);

  // One replication value n ||mu_b - D[delta_b]||^2 >= 0 (clamped; values
  // below -1e-10 raise a numerical error).
  double replication(Rng& rng) const;
  // B replications on substreams of seed, optionally in parallel; entry b is
  // bit-identical for any thread count.
  Eigen::VectorXd run(int B, std::uint64_t seed, int threads) const;

 private:
  const GramContext& ctx_;
  const Eigen::MatrixXd& kbar_;
  OuterKernel kernel_;
  NullModel model_;
  double fd_step_;
  GaussianParam theta_hat_;   // empirical (m^, Sigma^)
  Eigen::MatrixXd cov_dense_; // Sigma^ reconstructed densely, reused per draw
  Eigen::MatrixXd centered_;  // span coordinates minus the mean, reused per draw
  bool constant_T_;           // known model: D = 0 identically
};

class SlowBootstrap {
 public:
  SlowBootstrap(const GramContext& ctx, const OuterKernel& kernel,
                const NullModel& model);

  double replication(Rng& rng) const;
  Eigen::VectorXd run(int B, std::uint64_t seed, int threads) const;

 private:
  const GramContext& ctx_;
  OuterKernel kernel_;
  NullModel model_;
  GaussianParam theta_tilde_;  // fitted null parameter generating replicates
};

}  // namespace knt
