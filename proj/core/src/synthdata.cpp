#include "knt/synthdata.hpp"

#include <cmath>
#include <string>

#include "knt/errors.hpp"
#include "knt/rng.hpp"

namespace knt {

namespace {

void check_shape(int d, int n) {
  if (d < 1 || n < 1) {
    fail(ErrorKind::InvalidArgument,
         "need d >= 1 and n >= 1, got d = " + std::to_string(d) +
             ", n = " + std::to_string(n));
  }
}

}  // namespace

Eigen::MatrixXd gen_mixture(bool ha2, int d, int n, std::uint64_t seed) {
  check_shape(d, n);
  const double weight1 = ha2 ? 0.8 : 0.5;
  Eigen::VectorXd mu2(d);
  Eigen::VectorXd sd(d);
  for (int j = 0; j < d; ++j) {
    const double inv = 1.0 / static_cast<double>(j + 1);
    mu2(j) = 1.5 * inv;
    sd(j) = std::sqrt(0.5) * inv;  // Sigma = 0.5 diag(1, 1/4, ..., 1/d^2)
  }
  Rng rng(seed);
  Eigen::MatrixXd out(n, d);
  for (int i = 0; i < n; ++i) {
    const bool first = rng.uniform() < weight1;
    for (int j = 0; j < d; ++j) {
      out(i, j) = (first ? 0.0 : mu2(j)) + sd(j) * rng.normal();
    }
  }
  return out;
}

Eigen::VectorXd lowrank_eigenvalues(Scenario::Decay decay, int r_star) {
  if (r_star < 1) {
    fail(ErrorKind::InvalidArgument,
         "rank must be at least 1, got " + std::to_string(r_star));
  }
  Eigen::VectorXd lambda(r_star);
  for (int r = 1; r <= r_star; ++r) {
    lambda(r - 1) = decay == Scenario::Decay::Poly
                        ? 1.0 / static_cast<double>(r)
                        : std::exp(-0.2 * static_cast<double>(r));
  }
  return lambda;
}

Eigen::MatrixXd gen_lowrank(Scenario::Decay decay, int r_star, int d, int n,
                            std::uint64_t seed) {
  check_shape(d, n);
  if (r_star > d) {
    fail(ErrorKind::InvalidArgument,
         "rank " + std::to_string(r_star) + " exceeds the dimension " +
             std::to_string(d));
  }
  const Eigen::VectorXd sd = lowrank_eigenvalues(decay, r_star).cwiseSqrt();
  Rng rng(seed);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r_star; ++j) out(i, j) = sd(j) * rng.normal();
  }
  return out;
}

Eigen::MatrixXd gen_lowrank_noisy(int r_star, int d, int n, double rho,
                                  std::uint64_t seed) {
  check_shape(d, n);
  if (!(rho > 0.0)) {
    fail(ErrorKind::InvalidArgument,
         "signal-to-noise ratio must be positive, got " + std::to_string(rho));
  }
  const double noise_scale =
      lowrank_eigenvalues(Scenario::Decay::Exp, r_star)(r_star - 1) / rho;
  // The signal reuses gen_lowrank's stream exactly and the noise gets its own
  // substream, so rho -> infinity recovers gen_lowrank(seed) entry for entry.
  Eigen::MatrixXd out = gen_lowrank(Scenario::Decay::Exp, r_star, d, n, seed);
  Rng noise = Rng::substream(seed, 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) {
      out(i, j) += noise_scale * noise.student_t(10);
    }
  }
  return out;
}

Eigen::MatrixXd generate(const Scenario& scenario, std::uint64_t seed) {
  switch (scenario.kind) {
    case Scenario::Kind::NullGaussian: {
      check_shape(scenario.d, scenario.n);
      Rng rng(seed);
      return rng.normal_matrix(scenario.n, scenario.d);
    }
    case Scenario::Kind::MixtureHA1:
      return gen_mixture(false, scenario.d, scenario.n, seed);
    case Scenario::Kind::MixtureHA2:
      return gen_mixture(true, scenario.d, scenario.n, seed);
    case Scenario::Kind::Lowrank:
      return gen_lowrank(scenario.decay, scenario.r_star, scenario.d,
                         scenario.n, seed);
    case Scenario::Kind::LowrankNoisy:
      return gen_lowrank_noisy(scenario.r_star, scenario.d, scenario.n,
                               scenario.rho, seed);
  }
  fail(ErrorKind::InvalidArgument, "unknown scenario kind");
}

}  // namespace knt
