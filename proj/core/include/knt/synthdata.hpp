// Seeded generators for the synthetic scenarios shared by tests, the
// acceptance harness, and the CLI `simulate` subcommand.

#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace knt {

struct Scenario {
  enum class Kind {
    NullGaussian,   // i.i.d. N(0, I_d)
    MixtureHA1,     // 0.5/0.5 two-Gaussian mixture
    MixtureHA2,     // 0.8/0.2 two-Gaussian mixture
    Lowrank,        // N(0, diag(lambda_1..lambda_r*, 0..0))
    LowrankNoisy,   // low-rank signal plus scaled Student-t(10) noise
  };
  enum class Decay { Poly, Exp };  // lambda_r = 1/r or exp(-0.2 r)

  Kind kind = Kind::NullGaussian;
  int d = 2;
  int n = 100;
  Decay decay = Decay::Exp;
  int r_star = 10;
  double rho = 8.0;  // signal-to-noise ratio, LowrankNoisy only
};

// The mixture components: mu1 = 0, mu2 = 1.5 (1, 1/2, ..., 1/d), shared
// covariance 0.5 diag(1, 1/4, ..., 1/d^2); labels i.i.d. Bernoulli with
// component-1 weight 0.5 (HA1) or 0.8 (HA2).
Eigen::MatrixXd gen_mixture(bool ha2, int d, int n, std::uint64_t seed);

// Signal eigenvalues lambda_1..lambda_{r_star} for a decay profile.
Eigen::VectorXd lowrank_eigenvalues(Scenario::Decay decay, int r_star);

// Zero-mean Gaussian rows with covariance diag(lambda, 0, ..., 0) in R^d.
Eigen::MatrixXd gen_lowrank(Scenario::Decay decay, int r_star, int d, int n,
                            std::uint64_t seed);

// Y = Z + eps with Z as in gen_lowrank (exponential decay) and eps entries
// (lambda_{r_star} / rho) eta, eta i.i.d. Student-t with 10 degrees of
// freedom, redrawn for every entry; the noise scale is the smallest signal
// eigenvalue over rho (lambda_3 / rho when r_star = 3).
Eigen::MatrixXd gen_lowrank_noisy(int r_star, int d, int n, double rho,
                                  std::uint64_t seed);

Eigen::MatrixXd generate(const Scenario& scenario, std::uint64_t seed);

}  // namespace knt
