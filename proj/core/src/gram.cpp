#include "knt/gram.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

namespace knt {
namespace {

// Relative tolerances: symmetry of inputs, PSD clamp, and the cutoff below
// which covariance eigenvalues are dropped from the retained spectrum (their
// eigendirection coefficients would divide by ~0).
constexpr double kSymmetryTol = 1e-10;
constexpr double kPsdTol = 1e-8;
constexpr double kSpectrumDropTol = 1e-12;

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    fail(ErrorKind::InvalidData,
         std::string(what) + " contains non-finite entries");
  }
}

void check_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols()) {
    fail(ErrorKind::InvalidData,
         std::string(what) + " must be square, got " +
             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymmetryTol * scale) {
    fail(ErrorKind::InvalidData,
         std::string(what) + " is asymmetric beyond tolerance (max |M - M^T| = " +
             std::to_string(asym) + ")");
  }
}

// Descending-order selfadjoint eigendecomposition.
void eigen_descending(const Eigen::MatrixXd& m, Eigen::VectorXd* values,
                      Eigen::MatrixXd* vectors, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Numerical,
         std::string("eigensolver failed to converge on ") + what);
  }
  *values = solver.eigenvalues().reverse();
  *vectors = solver.eigenvectors().rowwise().reverse();
}

}  // namespace

Eigen::MatrixXd gram_from_vectors(const Eigen::MatrixXd& x) {
  if (x.rows() < 2) {
    fail(ErrorKind::InvalidData, "need at least 2 observations, got " +
                                     std::to_string(x.rows()));
  }
  if (x.cols() < 1) {
    fail(ErrorKind::InvalidData, "observations need at least 1 coordinate");
  }
  check_finite(x, "observation matrix");
  Eigen::MatrixXd k = x * x.transpose();
  return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k) {
  check_finite(k, "gram matrix");
  check_symmetric(k, "gram matrix");
  const Eigen::VectorXd row_means = k.rowwise().mean();
  const double grand_mean = row_means.mean();
  Eigen::MatrixXd k_c = k;
  k_c.colwise() -= row_means;
  k_c.rowwise() -= row_means.transpose();
  k_c.array() += grand_mean;
  return 0.5 * (k_c + k_c.transpose());
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigendecompose_centered(
    const Eigen::MatrixXd& k_c) {
  check_finite(k_c, "centered gram matrix");
  check_symmetric(k_c, "centered gram matrix");
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  eigen_descending(k_c, &values, &vectors, "the centered gram matrix");

  const double n = static_cast<double>(k_c.rows());
  const double top = std::max(values(0), 0.0);
  for (Eigen::Index s = 0; s < values.size(); ++s) {
    if (values(s) < -kPsdTol * std::max(top, 1e-300)) {
      fail(ErrorKind::InvalidData,
           "centered gram matrix is not positive semi-definite (eigenvalue " +
               std::to_string(values(s) / n) + " against largest " +
               std::to_string(top / n) + ")");
    }
    values(s) = std::max(values(s), 0.0) / n;
  }
  return {std::move(values), std::move(vectors)};
}

GramContext::GramContext(const Dataset& dataset) {
  const Eigen::MatrixXd& input = dataset.data;
  if (input.rows() < 2) {
    fail(ErrorKind::InvalidData, "need at least 2 observations, got " +
                                     std::to_string(input.rows()));
  }
  check_finite(input, "input data");

  if (dataset.mode == Dataset::Mode::Vectors) {
    vectors_mode_ = true;
    coords_ = input;
    k_ = gram_from_vectors(input);
  } else {
    vectors_mode_ = false;
    if (input.rows() != input.cols()) {
      fail(ErrorKind::InvalidData, "gram matrix must be square, got " +
                                       std::to_string(input.rows()) + "x" +
                                       std::to_string(input.cols()));
    }
    check_symmetric(input, "gram matrix");
    k_ = 0.5 * (input + input.transpose());

    // Recover span coordinates by factoring K = V L V^T; rows of V L^{1/2}
    // reproduce every pairwise inner product.
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    eigen_descending(k_, &values, &vectors, "the gram matrix");
    const double top = std::max(values(0), 0.0);
    if (values(values.size() - 1) < -kPsdTol * std::max(top, 1e-300)) {
      fail(ErrorKind::InvalidData,
           "gram matrix is not positive semi-definite (eigenvalue " +
               std::to_string(values(values.size() - 1)) +
               " against largest " + std::to_string(top) + ")");
    }
    Eigen::Index rank = 0;
    while (rank < values.size() && values(rank) > kSpectrumDropTol * top) {
      ++rank;
    }
    if (rank == 0) {
      // All inner products are ~0: every observation is the zero element.
      coords_ = Eigen::MatrixXd::Zero(input.rows(), 1);
    } else {
      coords_ = vectors.leftCols(rank);
      for (Eigen::Index c = 0; c < rank; ++c) {
        coords_.col(c) *= std::sqrt(values(c));
      }
    }
  }

  k_c_ = center_gram(k_);
  mean_ = coords_.colwise().mean().transpose();

  // Spectrum of the empirical covariance (1/n convention) over span
  // coordinates; equivalent to the nonzero spectrum of K_c / n.
  const Eigen::MatrixXd centered = coords_.rowwise() - mean_.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered /
                        static_cast<double>(coords_.rows());
  cov = 0.5 * (cov + cov.transpose());
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  eigen_descending(cov, &values, &vectors, "the covariance matrix");
  const double top = std::max(values(0), 0.0);
  Eigen::Index rank = 0;
  while (rank < values.size() && values(rank) > kSpectrumDropTol * top) ++rank;
  lambda_ = values.head(rank);
  dirs_ = vectors.leftCols(rank);
}

Eigen::MatrixXd GramContext::centered_eigenvectors() const {
  const Eigen::MatrixXd centered = coords_.rowwise() - mean_.transpose();
  Eigen::MatrixXd u = centered * dirs_;
  const double n = static_cast<double>(coords_.rows());
  for (Eigen::Index s = 0; s < lambda_.size(); ++s) {
    u.col(s) /= std::sqrt(n * lambda_(s));
  }
  return u;
}

Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& pts,
                                const GaussianParam& param, double c) {
  if (pts.cols() != param.mean.size()) {
    fail(ErrorKind::InvalidArgument,
         "points have dimension " + std::to_string(pts.cols()) +
             ", parameter lives in dimension " +
             std::to_string(param.mean.size()));
  }
  const Eigen::MatrixXd diff = pts.rowwise() - param.mean.transpose();
  Eigen::VectorXd q = diff.rowwise().squaredNorm();
  if (param.lambda.size() > 0 && c != 0.0) {
    Eigen::VectorXd factors(param.lambda.size());
    for (Eigen::Index s = 0; s < param.lambda.size(); ++s) {
      const double shifted = 1.0 + c * param.lambda(s);
      if (shifted <= 0.0) {
        fail(ErrorKind::SingularOperator,
             "operator I + c Sigma is not positive definite: 1 + c lambda = " +
                 std::to_string(shifted) + " at eigenvalue " +
                 std::to_string(param.lambda(s)) + ", c = " +
                 std::to_string(c));
      }
      factors(s) = 1.0 / shifted - 1.0;
    }
    const Eigen::MatrixXd proj = diff * param.dirs;
    q += proj.array().square().matrix() * factors;
  }
  return q.cwiseMax(0.0);
}

Eigen::VectorXd quadratic_forms(const GramContext& ctx,
                                const GaussianParam& param, double c) {
  return quadratic_forms(ctx.coords(), param, c);
}

double log_det_shift(const Eigen::VectorXd& lambda, double c) {
  double sum = 0.0;
  for (Eigen::Index s = 0; s < lambda.size(); ++s) {
    const double shifted = 1.0 + c * lambda(s);
    if (shifted <= 0.0) {
      fail(ErrorKind::SingularOperator,
           "log det of I + c Sigma undefined: 1 + c lambda = " +
               std::to_string(shifted) + " at eigenvalue " +
               std::to_string(lambda(s)) + ", c = " + std::to_string(c));
    }
    sum += std::log1p(c * lambda(s));
  }
  return sum;
}

}  // namespace knt
