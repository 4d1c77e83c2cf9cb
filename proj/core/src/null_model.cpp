#include "knt/null_model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace knt {
namespace {

constexpr double kPsdTol = 1e-8;
constexpr double kSpectrumDropTol = 1e-12;
constexpr double kEigengapTol = 1e-10;

void check_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::Parameter, std::string(what) + " must be square, got " +
                                   std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    fail(ErrorKind::Parameter, std::string(what) + " must be symmetric");
  }
}

// Eigendecompose a fixed covariance, clamp numerical negatives, drop the tail.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> covariance_spectrum(
    const Eigen::MatrixXd& cov, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Numerical,
         std::string("eigensolver failed to converge on ") + what);
  }
  Eigen::VectorXd values = solver.eigenvalues().reverse();
  Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
  const double top = std::max(values.size() > 0 ? values(0) : 0.0, 0.0);
  for (Eigen::Index s = 0; s < values.size(); ++s) {
    if (values(s) < -kPsdTol * std::max(top, 1e-300)) {
      fail(ErrorKind::Parameter,
           std::string(what) + " is not positive semi-definite (eigenvalue " +
               std::to_string(values(s)) + ")");
    }
    values(s) = std::max(values(s), 0.0);
  }
  Eigen::Index rank = 0;
  while (rank < values.size() && values(rank) > kSpectrumDropTol * top) ++rank;
  return {values.head(rank), vectors.leftCols(rank)};
}

Eigen::VectorXd resolve_fixed_mean(const NullModel& model,
                                   const GramContext& ctx) {
  if (model.mean0) {
    if (!ctx.vectors_mode()) {
      fail(ErrorKind::Representation,
           "explicit fixed parameters need vector-mode data; gram-mode data "
           "carries no ambient coordinates - supply sample coefficients "
           "instead");
    }
    if (model.mean0->size() != ctx.span_dim()) {
      fail(ErrorKind::Parameter,
           "fixed mean has dimension " + std::to_string(model.mean0->size()) +
               ", data has dimension " + std::to_string(ctx.span_dim()));
    }
    return *model.mean0;
  }
  if (model.mean0_coeffs) {
    if (model.mean0_coeffs->size() != ctx.n()) {
      fail(ErrorKind::Parameter,
           "mean coefficient vector has length " +
               std::to_string(model.mean0_coeffs->size()) + ", expected n = " +
               std::to_string(ctx.n()));
    }
    // m0 = mean + sum_i a_i (Y_i - mean).
    const Eigen::MatrixXd centered =
        ctx.coords().rowwise() - ctx.mean().transpose();
    return ctx.mean() + centered.transpose() * *model.mean0_coeffs;
  }
  fail(ErrorKind::Parameter, "model carries no fixed mean");
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> resolve_fixed_covariance(
    const NullModel& model, const GramContext& ctx) {
  if (model.cov0) {
    if (!ctx.vectors_mode()) {
      fail(ErrorKind::Representation,
           "explicit fixed parameters need vector-mode data; gram-mode data "
           "carries no ambient coordinates - supply sample coefficients "
           "instead");
    }
    if (model.cov0->rows() != ctx.span_dim()) {
      fail(ErrorKind::Parameter,
           "fixed covariance is " + std::to_string(model.cov0->rows()) + "x" +
               std::to_string(model.cov0->cols()) + ", data has dimension " +
               std::to_string(ctx.span_dim()));
    }
    return covariance_spectrum(*model.cov0, "the fixed covariance");
  }
  if (model.cov0_coeffs) {
    if (model.cov0_coeffs->rows() != ctx.n()) {
      fail(ErrorKind::Parameter,
           "covariance coefficient matrix must be n x n with n = " +
               std::to_string(ctx.n()) + ", got " +
               std::to_string(model.cov0_coeffs->rows()) + "x" +
               std::to_string(model.cov0_coeffs->cols()));
    }
    // S0 = sum_ij C_ij (Y_i - mean)(Y_j - mean)^T over span coordinates.
    const Eigen::MatrixXd centered =
        ctx.coords().rowwise() - ctx.mean().transpose();
    Eigen::MatrixXd cov =
        centered.transpose() * *model.cov0_coeffs * centered;
    cov = 0.5 * (cov + cov.transpose());
    return covariance_spectrum(cov, "the fixed covariance");
  }
  fail(ErrorKind::Parameter, "model carries no fixed covariance");
}

}  // namespace

NullModel NullModel::full() { return NullModel{}; }

NullModel NullModel::known(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
  check_square_symmetric(cov, "the fixed covariance");
  if (cov.rows() != mean.size()) {
    fail(ErrorKind::Parameter,
         "fixed mean has dimension " + std::to_string(mean.size()) +
             " but the fixed covariance is " + std::to_string(cov.rows()) +
             "x" + std::to_string(cov.cols()));
  }
  NullModel m;
  m.kind = Kind::Known;
  m.mean0 = std::move(mean);
  m.cov0 = std::move(cov);
  return m;
}

NullModel NullModel::known_mean(Eigen::VectorXd mean) {
  NullModel m;
  m.kind = Kind::KnownMean;
  m.mean0 = std::move(mean);
  return m;
}

NullModel NullModel::known_coeffs(Eigen::VectorXd mean_coeffs,
                                  Eigen::MatrixXd cov_coeffs) {
  check_square_symmetric(cov_coeffs, "the covariance coefficient matrix");
  NullModel m;
  m.kind = Kind::Known;
  m.mean0_coeffs = std::move(mean_coeffs);
  m.cov0_coeffs = std::move(cov_coeffs);
  return m;
}

NullModel NullModel::known_mean_coeffs(Eigen::VectorXd mean_coeffs) {
  NullModel m;
  m.kind = Kind::KnownMean;
  m.mean0_coeffs = std::move(mean_coeffs);
  return m;
}

NullModel NullModel::rank_model(int r) {
  if (r < 1) {
    fail(ErrorKind::InvalidArgument,
         "rank must be at least 1, got " + std::to_string(r));
  }
  NullModel m;
  m.kind = Kind::Rank;
  m.rank = r;
  return m;
}

GaussianParam empirical_param(const GramContext& ctx) {
  return GaussianParam{ctx.mean(), ctx.eigenvalues(), ctx.directions()};
}

GaussianParam apply_T(const NullModel& model, const GramContext& ctx,
                      const GaussianParam& theta) {
  switch (model.kind) {
    case NullModel::Kind::Full:
      return theta;
    case NullModel::Kind::Known: {
      auto [lambda, dirs] = resolve_fixed_covariance(model, ctx);
      return GaussianParam{resolve_fixed_mean(model, ctx), std::move(lambda),
                           std::move(dirs)};
    }
    case NullModel::Kind::KnownMean:
      return GaussianParam{resolve_fixed_mean(model, ctx), theta.lambda,
                           theta.dirs};
    case NullModel::Kind::Rank:
      break;
  }

  const int r = model.rank;
  if (r < 1 || r > ctx.n() - 1) {
    fail(ErrorKind::InvalidArgument,
         "rank must lie in [1, n-1] = [1, " + std::to_string(ctx.n() - 1) +
             "], got " + std::to_string(r));
  }
  Eigen::Index positive = 0;
  while (positive < theta.lambda.size() && theta.lambda(positive) > 0.0) {
    ++positive;
  }
  if (positive < r) {
    fail(ErrorKind::RankDeficiency,
         "rank-" + std::to_string(r) + " null needs at least " +
             std::to_string(r) +
             " strictly positive covariance eigenvalues, found " +
             std::to_string(positive));
  }
  const double top = theta.lambda(0);
  const double at_rank = theta.lambda(r - 1);
  const double next = r < theta.lambda.size() ? theta.lambda(r) : 0.0;
  if (at_rank - next < kEigengapTol * top) {
    fail(ErrorKind::Precondition,
         "rank-" + std::to_string(r) +
             " truncation is not differentiable at an eigengap tie: lambda_" +
             std::to_string(r) + " = " + std::to_string(at_rank) +
             ", lambda_" + std::to_string(r + 1) + " = " +
             std::to_string(next) + " (tolerance " +
             std::to_string(kEigengapTol * top) + ")");
  }
  return GaussianParam{theta.mean, theta.lambda.head(r), theta.dirs.leftCols(r)};
}

GaussianParam fit(const NullModel& model, const GramContext& ctx) {
  return apply_T(model, ctx, empirical_param(ctx));
}

}  // namespace knt
