#include "knt/embedding.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace knt {
namespace {

constexpr double kUnitSpectrumTol = 1e-10;  // strictness of "< 1" conditions

void check_param(const GaussianParam& param) {
  if (param.lambda.size() != param.dirs.cols() ||
      param.mean.size() != param.dirs.rows()) {
    fail(ErrorKind::Parameter,
         "inconsistent parameter: mean dimension " +
             std::to_string(param.mean.size()) + ", " +
             std::to_string(param.lambda.size()) + " eigenvalues, directions " +
             std::to_string(param.dirs.rows()) + "x" +
             std::to_string(param.dirs.cols()));
  }
}

// Largest |eigenvalue| of a spectrally represented covariance.
double spectral_bound(const Eigen::VectorXd& lambda) {
  return lambda.size() == 0 ? 0.0 : lambda.cwiseAbs().maxCoeff();
}

void require_below_one(const Eigen::VectorXd& lambda, const char* context) {
  for (Eigen::Index s = 0; s < lambda.size(); ++s) {
    if (std::abs(lambda(s)) >= 1.0 - kUnitSpectrumTol) {
      fail(ErrorKind::Precondition,
           std::string(context) +
               " needs every covariance eigenvalue strictly below 1 in "
               "magnitude; eigenvalue " +
               std::to_string(s + 1) + " is " + std::to_string(lambda(s)));
    }
  }
}

// Spectrum (eigenvalues mu_k, directions Q e_k) of the low-rank sum
// Sigma1 + Sigma2, computed in an orthonormal basis Q of the combined
// direction span so the cost depends on the ranks, not the span dimension.
struct CombinedSpectrum {
  Eigen::VectorXd mu;
  Eigen::MatrixXd dirs;  // span_dim x mu.size()
};

CombinedSpectrum combine_covariances(const GaussianParam& a,
                                     const GaussianParam& b) {
  const Eigen::Index ra = a.lambda.size();
  const Eigen::Index rb = b.lambda.size();
  CombinedSpectrum out;
  if (ra + rb == 0) return out;

  Eigen::MatrixXd f(a.dirs.rows(), ra + rb);
  f.leftCols(ra) = a.dirs;
  f.rightCols(rb) = b.dirs;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(f);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return out;
  const Eigen::MatrixXd q =
      qr.householderQ() * Eigen::MatrixXd::Identity(f.rows(), rank);

  Eigen::MatrixXd core = Eigen::MatrixXd::Zero(rank, rank);
  if (ra > 0) {
    const Eigen::MatrixXd qa = q.transpose() * a.dirs;
    core += qa * a.lambda.asDiagonal() * qa.transpose();
  }
  if (rb > 0) {
    const Eigen::MatrixXd qb = q.transpose() * b.dirs;
    core += qb * b.lambda.asDiagonal() * qb.transpose();
  }
  core = 0.5 * (core + core.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(core);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Numerical,
         "eigensolver failed on the combined covariance of a cross inner "
         "product");
  }
  out.mu = solver.eigenvalues().reverse();
  out.dirs = q * solver.eigenvectors().rowwise().reverse();
  return out;
}

double gaussian_cross_inner(double sigma, const GaussianParam& a,
                            const GaussianParam& b) {
  const Eigen::VectorXd delta = a.mean - b.mean;
  const CombinedSpectrum sum = combine_covariances(a, b);
  const double log_det = log_det_shift(sum.mu, 2.0 * sigma);
  double quad = delta.squaredNorm();
  for (Eigen::Index k = 0; k < sum.mu.size(); ++k) {
    const double shifted = 1.0 + 2.0 * sigma * sum.mu(k);
    const double proj = sum.dirs.col(k).dot(delta);
    quad += (1.0 / shifted - 1.0) * proj * proj;
  }
  return std::exp(-0.5 * log_det - sigma * std::max(quad, 0.0));
}

double exponential_cross_inner(const GaussianParam& a, const GaussianParam& b) {
  const Eigen::Index ra = a.lambda.size();
  const Eigen::Index rb = b.lambda.size();

  // Spectral-radius condition on Sigma_b Sigma_a: cheap sufficient bound
  // first, exact (possibly complex) spectrum of the rank-limited core next.
  const double bound = spectral_bound(a.lambda) * spectral_bound(b.lambda);
  Eigen::MatrixXd core_ba;  // C^T L_a C L_b with C = dirs_a^T dirs_b
  if (ra > 0 && rb > 0) {
    const Eigen::MatrixXd c = a.dirs.transpose() * b.dirs;  // ra x rb
    core_ba = c.transpose() * a.lambda.asDiagonal() * c * b.lambda.asDiagonal();
    if (bound >= 1.0 - kUnitSpectrumTol) {
      const Eigen::EigenSolver<Eigen::MatrixXd> solver(core_ba);
      if (solver.info() != Eigen::Success) {
        fail(ErrorKind::Numerical,
             "eigensolver failed on the operator product of a cross inner "
             "product");
      }
      const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
      if (radius >= 1.0 - kUnitSpectrumTol) {
        fail(ErrorKind::Precondition,
             "cross inner product of exponential-kernel embeddings needs the "
             "spectral radius of Sigma2 Sigma1 strictly below 1, got " +
                 std::to_string(radius));
      }
    }
  }

  // exp(<m_a, m_b> + 1/2 m_a^T Sigma_b m_a
  //     + 1/2 v^T Sigma_a (I - Sigma_b Sigma_a)^{-1} v), v = m_b + Sigma_b m_a,
  // all products expanded through the spectral factors; the resolvent uses
  // (I - U W)^{-1} = I + U (I - W U)^{-1} W with U = dirs_b L_b,
  // W = dirs_b^T Sigma_a, so only an rb x rb system is solved.
  double exponent = a.mean.dot(b.mean);
  Eigen::VectorXd v = b.mean;
  if (rb > 0) {
    const Eigen::VectorXd pb_m = b.dirs.transpose() * a.mean;
    exponent += 0.5 * pb_m.dot(b.lambda.asDiagonal() * pb_m);
    v += b.dirs * (b.lambda.asDiagonal() * pb_m);
  }

  double log_det = 0.0;
  Eigen::VectorXd resolvent_v = v;  // (I - Sigma_b Sigma_a)^{-1} v
  if (ra > 0 && rb > 0) {
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(rb, rb) - core_ba;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const double det = lu.determinant();
    if (!(det > 0.0) || !std::isfinite(det)) {
      fail(ErrorKind::Precondition,
           "cross inner product of exponential-kernel embeddings is "
           "undefined: det(I - Sigma2 Sigma1) = " +
               std::to_string(det));
    }
    log_det = std::log(det);
    // W v with W = dirs_b^T Sigma_a = (dirs_a^T dirs_b)^T L_a dirs_a^T.
    const Eigen::VectorXd wv =
        (a.dirs.transpose() * b.dirs).transpose() *
        (a.lambda.asDiagonal() * (a.dirs.transpose() * v));
    resolvent_v += b.dirs * (b.lambda.asDiagonal() * lu.solve(wv));
  }
  if (ra > 0) {
    const Eigen::VectorXd pa_v = a.dirs.transpose() * v;
    const Eigen::VectorXd pa_rv = a.dirs.transpose() * resolvent_v;
    exponent += 0.5 * pa_v.dot(a.lambda.asDiagonal() * pa_rv);
  }
  return std::exp(-0.5 * log_det + exponent);
}

}  // namespace

OuterKernel OuterKernel::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    fail(ErrorKind::Parameter,
         "gaussian kernel bandwidth must be positive and finite, got " +
             std::to_string(sigma));
  }
  OuterKernel k;
  k.kind = Kind::Gaussian;
  k.sigma = sigma;
  return k;
}

OuterKernel OuterKernel::exponential() {
  OuterKernel k;
  k.kind = Kind::Exponential;
  k.sigma = 0.0;
  return k;
}

Eigen::MatrixXd outer_kernel_matrix(const OuterKernel& kernel,
                                    const Eigen::MatrixXd& gram) {
  const Eigen::MatrixXd& k = gram;
  if (k.rows() != k.cols()) {
    fail(ErrorKind::InvalidArgument, "gram matrix must be square, got " +
                                         std::to_string(k.rows()) + "x" +
                                         std::to_string(k.cols()));
  }
  if (kernel.kind == OuterKernel::Kind::Exponential) {
    return k.array().exp();
  }
  const Eigen::VectorXd diag = k.diagonal();
  Eigen::MatrixXd sq = (-2.0) * k;
  sq.colwise() += diag;
  sq.rowwise() += diag.transpose();
  sq = sq.cwiseMax(0.0);
  return (-kernel.sigma * sq.array()).exp();
}

Eigen::MatrixXd outer_kernel_matrix(const OuterKernel& kernel,
                                    const GramContext& ctx) {
  return outer_kernel_matrix(kernel, ctx.gram());
}

double embed_eval(const OuterKernel& kernel, const GaussianParam& param,
                  const Eigen::VectorXd& y) {
  return embed_eval_batch(kernel, param, y.transpose())(0);
}

Eigen::VectorXd embed_eval_batch(const OuterKernel& kernel,
                                 const GaussianParam& param,
                                 const Eigen::MatrixXd& pts) {
  check_param(param);
  if (kernel.kind == OuterKernel::Kind::Gaussian) {
    const double log_det = log_det_shift(param.lambda, 2.0 * kernel.sigma);
    const Eigen::VectorXd q = quadratic_forms(pts, param, 2.0 * kernel.sigma);
    return (-0.5 * log_det - kernel.sigma * q.array()).exp();
  }
  // exp(<m, y> + 1/2 y^T Sigma y), spectrally expanded.
  Eigen::VectorXd exponent = pts * param.mean;
  if (param.lambda.size() > 0) {
    const Eigen::MatrixXd proj = pts * param.dirs;
    exponent += 0.5 * (proj.array().square().matrix() * param.lambda);
  }
  return exponent.array().exp();
}

double embed_norm_sq(const OuterKernel& kernel, const GaussianParam& param) {
  check_param(param);
  if (kernel.kind == OuterKernel::Kind::Gaussian) {
    return std::exp(-0.5 * log_det_shift(param.lambda, 4.0 * kernel.sigma));
  }
  require_below_one(param.lambda, "exponential-kernel embedding norm");
  // |I - Sigma^2|^{-1/2} exp(m^T (I - Sigma)^{-1} m).
  double log_det = 0.0;
  double exponent = param.mean.squaredNorm();
  for (Eigen::Index s = 0; s < param.lambda.size(); ++s) {
    const double l = param.lambda(s);
    log_det += std::log1p(-l * l);
    const double proj = param.dirs.col(s).dot(param.mean);
    exponent += l / (1.0 - l) * proj * proj;
  }
  return std::exp(-0.5 * log_det + exponent);
}

double embed_cross_inner(const OuterKernel& kernel, const GaussianParam& theta1,
                         const GaussianParam& theta2) {
  check_param(theta1);
  check_param(theta2);
  if (theta1.mean.size() != theta2.mean.size()) {
    fail(ErrorKind::InvalidArgument,
         "cross inner product needs parameters over the same coordinates, got "
         "dimensions " +
             std::to_string(theta1.mean.size()) + " and " +
             std::to_string(theta2.mean.size()));
  }
  if (kernel.kind == OuterKernel::Kind::Gaussian) {
    return gaussian_cross_inner(kernel.sigma, theta1, theta2);
  }
  return exponential_cross_inner(theta1, theta2);
}

double median_heuristic_sigma(const GramContext& ctx) {
  const Eigen::MatrixXd& k = ctx.gram();
  const Eigen::Index n = k.rows();
  std::vector<double> sq;
  sq.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      sq.push_back(std::max(k(i, i) + k(j, j) - 2.0 * k(i, j), 0.0));
    }
  }
  auto mid = sq.begin() + static_cast<std::ptrdiff_t>(sq.size() / 2);
  std::nth_element(sq.begin(), mid, sq.end());
  if (!(*mid > 0.0)) {
    fail(ErrorKind::DegenerateData,
         "median pairwise squared distance is zero; a bandwidth cannot be "
         "inferred - pass one explicitly");
  }
  return 1.0 / (2.0 * *mid);
}

}  // namespace knt
