#include "knt/bootstrap.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "knt/errors.hpp"
#include "knt/parallel.hpp"

namespace knt {

namespace {

// Replication values are clamped to zero down to this round-off allowance;
// anything lower means the finite-difference linearization lost too much
// precision and is reported as an error instead of silently truncated.
constexpr double kReplicationFloor = -1e-10;

// FD spectra keep signed eigenvalues; only coordinates that are zero to
// machine precision relative to the largest magnitude are dropped.
constexpr double kSignedDropTol = 1e-14;

// Classical replications use a disjoint substream range so that fast and slow
// schemes never share draws, even under one seed in a combined run.
constexpr std::uint64_t kSlowStreamTag = 0x8000000000000000ULL;

Eigen::MatrixXd dense_covariance(const GaussianParam& param) {
  const Eigen::Index dim = param.mean.size();
  if (param.lambda.size() == 0) return Eigen::MatrixXd::Zero(dim, dim);
  Eigen::MatrixXd cov =
      param.dirs * param.lambda.asDiagonal() * param.dirs.transpose();
  return 0.5 * (cov + cov.transpose());
}

// Spectral decomposition of a dense symmetric perturbed covariance, keeping
// signed eigenvalues in descending order.  Clamping negatives here would
// destroy the odd symmetry of the central difference, so they stay signed;
// the closed forms downstream are analytic in the eigenvalues.
GaussianParam signed_spectrum_param(const Eigen::VectorXd& mean,
                                    const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    fail(ErrorKind::Numerical,
         "eigendecomposition of a perturbed covariance did not converge");
  }
  const Eigen::VectorXd values = solver.eigenvalues().reverse();
  const Eigen::MatrixXd vectors = solver.eigenvectors().rowwise().reverse();
  const double top = values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
  const double drop = kSignedDropTol * top;
  Eigen::Index kept = 0;
  for (Eigen::Index s = 0; s < values.size(); ++s) {
    if (std::abs(values(s)) > drop) ++kept;
  }
  GaussianParam out;
  out.mean = mean;
  out.lambda.resize(kept);
  out.dirs.resize(cov.rows(), kept);
  Eigen::Index w = 0;
  for (Eigen::Index s = 0; s < values.size(); ++s) {
    if (std::abs(values(s)) <= drop) continue;
    out.lambda(w) = values(s);
    out.dirs.col(w) = vectors.col(s);
    ++w;
  }
  return out;
}

GaussianParam apply_map_for_fd(const NullModel& model, const GramContext& ctx,
                               const GaussianParam& raw) {
  try {
    return apply_T(model, ctx, raw);
  } catch (const Error& e) {
    std::string msg = e.what();
    const std::string prefix = std::string(to_string(e.kind())) + ": ";
    if (msg.compare(0, prefix.size(), prefix) == 0) msg.erase(0, prefix.size());
    throw Error(e.kind(),
                msg +
                    " (while linearizing the estimator map by central "
                    "differences; a smaller fd step keeps the perturbed "
                    "parameter closer to the fitted one)");
  }
}

LinearizedEmbedding linearize(const NullModel& model, const GramContext& ctx,
                              const GaussianParam& theta_hat,
                              const Eigen::MatrixXd& cov_dense,
                              const ParamPerturbation& delta, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    fail(ErrorKind::InvalidArgument,
         "finite-difference step must be positive, got " + std::to_string(h));
  }
  if (model.kind == NullModel::Kind::Known) return LinearizedEmbedding::zero();
  const double delta_scale = perturbation_norm(delta);
  if (delta_scale == 0.0) return LinearizedEmbedding::zero();
  // Relative step: tau * ||delta|| = h * ||theta_hat||.  A parameter with no
  // scale at all (all-zero data) falls back to an absolute step.
  double scale = theta_norm(theta_hat);
  if (!(scale > 0.0)) scale = 1.0;
  const double tau = h * scale / delta_scale;

  const Eigen::VectorXd mean_plus = theta_hat.mean + tau * delta.dmean;
  const Eigen::VectorXd mean_minus = theta_hat.mean - tau * delta.dmean;
  Eigen::MatrixXd cov_plus = cov_dense + tau * delta.dcov;
  Eigen::MatrixXd cov_minus = cov_dense - tau * delta.dcov;
  cov_plus = 0.5 * (cov_plus + cov_plus.transpose());
  cov_minus = 0.5 * (cov_minus + cov_minus.transpose());

  GaussianParam plus = apply_map_for_fd(
      model, ctx, signed_spectrum_param(mean_plus, cov_plus));
  GaussianParam minus = apply_map_for_fd(
      model, ctx, signed_spectrum_param(mean_minus, cov_minus));
  return LinearizedEmbedding(std::move(plus), std::move(minus), tau);
}

double clamp_replication(double value) {
  if (value >= 0.0) return value;
  if (value < kReplicationFloor) {
    fail(ErrorKind::Numerical,
         "bootstrap replication came out at " + std::to_string(value) +
             ", beyond the round-off clamp at " +
             std::to_string(kReplicationFloor) +
             "; the finite-difference linearization lost precision - a "
             "larger fd step reduces cancellation noise");
  }
  return 0.0;
}

}  // namespace

double theta_norm(const GaussianParam& param) {
  // ||Sigma||_F^2 = sum lambda_s^2 for orthonormal directions.
  return std::sqrt(param.mean.squaredNorm() + param.lambda.squaredNorm());
}

double perturbation_norm(const ParamPerturbation& delta) {
  return std::sqrt(delta.dmean.squaredNorm() + delta.dcov.squaredNorm());
}

LinearizedEmbedding LinearizedEmbedding::zero() { return LinearizedEmbedding(); }

LinearizedEmbedding::LinearizedEmbedding(GaussianParam plus, GaussianParam minus,
                                         double tau)
    : zero_(false), plus_(std::move(plus)), minus_(std::move(minus)), tau_(tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    fail(ErrorKind::InvalidArgument,
         "linearization step must be positive and finite, got " +
             std::to_string(tau));
  }
}

double LinearizedEmbedding::eval(const OuterKernel& kernel,
                                 const Eigen::VectorXd& y) const {
  if (zero_) return 0.0;
  return (embed_eval(kernel, plus_, y) - embed_eval(kernel, minus_, y)) /
         (2.0 * tau_);
}

Eigen::VectorXd LinearizedEmbedding::eval_batch(
    const OuterKernel& kernel, const Eigen::MatrixXd& pts) const {
  if (zero_) return Eigen::VectorXd::Zero(pts.rows());
  return (embed_eval_batch(kernel, plus_, pts) -
          embed_eval_batch(kernel, minus_, pts)) /
         (2.0 * tau_);
}

double LinearizedEmbedding::norm_sq(const OuterKernel& kernel) const {
  if (zero_) return 0.0;
  const double np = embed_norm_sq(kernel, plus_);
  const double nm = embed_norm_sq(kernel, minus_);
  const double cross = embed_cross_inner(kernel, plus_, minus_);
  const double value = (np - 2.0 * cross + nm) / (4.0 * tau_ * tau_);
  // ||.||^2 is nonnegative; cancellation can leave a tiny negative residue.
  return value > 0.0 ? value : 0.0;
}

LinearizedEmbedding frechet_fd(const OuterKernel& kernel, const NullModel& model,
                               const GramContext& ctx,
                               const GaussianParam& theta_hat,
                               const ParamPerturbation& delta, double h) {
  (void)kernel;  // the element is kernel-agnostic until evaluated
  if (theta_hat.mean.size() != ctx.span_dim()) {
    fail(ErrorKind::InvalidArgument,
         "parameter dimension " + std::to_string(theta_hat.mean.size()) +
             " does not match the span dimension " +
             std::to_string(ctx.span_dim()));
  }
  if (delta.dmean.size() != theta_hat.mean.size() ||
      delta.dcov.rows() != theta_hat.mean.size() ||
      delta.dcov.cols() != theta_hat.mean.size()) {
    fail(ErrorKind::InvalidArgument,
         "perturbation dimensions do not match the parameter");
  }
  return linearize(model, ctx, theta_hat, dense_covariance(theta_hat), delta, h);
}

FastBootstrap::FastBootstrap(const GramContext& ctx, const Eigen::MatrixXd& kbar,
                             const OuterKernel& kernel, const NullModel& model,
                             double fd_step)
    : ctx_(ctx),
      kbar_(kbar),
      kernel_(kernel),
      model_(model),
      fd_step_(fd_step) {
  if (!(fd_step > 0.0) || !std::isfinite(fd_step)) {
    fail(ErrorKind::InvalidArgument,
         "finite-difference step must be positive, got " +
             std::to_string(fd_step));
  }
  if (kbar.rows() != ctx.n() || kbar.cols() != ctx.n()) {
    fail(ErrorKind::InvalidArgument,
         "outer kernel matrix must be n x n with n = " +
             std::to_string(ctx.n()) + ", got " + std::to_string(kbar.rows()) +
             "x" + std::to_string(kbar.cols()));
  }
  theta_hat_ = empirical_param(ctx);
  cov_dense_ = dense_covariance(theta_hat_);
  centered_ = ctx.coords().rowwise() - ctx.mean().transpose();
  constant_T_ = model.kind == NullModel::Kind::Known;
  // Validate the model against the data once, up front, rather than inside
  // every replication (fixed parameters must resolve, rank must be in range).
  (void)fit(model_, ctx_);
}

double FastBootstrap::replication(Rng& rng) const {
  const Eigen::Index n = ctx_.n();
  const double nd = static_cast<double>(n);
  Eigen::VectorXd w = rng.normal_vector(n);
  w.array() -= w.mean();

  // n ||mu_b||^2 contribution: w^T Kbar w / n^2.
  const double t1 = w.dot(kbar_ * w) / (nd * nd);

  double value;
  if (constant_T_) {
    // Constant estimator map: the derivative term vanishes identically.
    value = nd * t1;
  } else {
    // Weighted parameter perturbation, with the weighted mean inside the
    // tensor square:
    //   m_b = (1/n) sum_i w_i Y_i,
    //   S_b = (1/n) sum_i w_i (Y_i - m_b)(Y_i - m_b)^T.
    // Because the weights sum to zero, m_b may be accumulated over centered
    // points (identical value, smaller intermediates).
    ParamPerturbation delta;
    delta.dmean = centered_.transpose() * w / nd;
    const Eigen::MatrixXd shifted =
        ctx_.coords().rowwise() - delta.dmean.transpose();
    Eigen::MatrixXd dcov = shifted.transpose() * (w.asDiagonal() * shifted) / nd;
    delta.dcov = 0.5 * (dcov + dcov.transpose());

    const LinearizedEmbedding lin =
        linearize(model_, ctx_, theta_hat_, cov_dense_, delta, fd_step_);
    const double t2 = w.dot(lin.eval_batch(kernel_, ctx_.coords())) / nd;
    const double t3 = lin.norm_sq(kernel_);
    value = nd * (t1 - 2.0 * t2 + t3);
  }
  return clamp_replication(value);
}

Eigen::VectorXd FastBootstrap::run(int B, std::uint64_t seed,
                                   int threads) const {
  if (B < 1) {
    fail(ErrorKind::InvalidArgument,
         "replication count must be at least 1, got " + std::to_string(B));
  }
  Eigen::VectorXd out(B);
  parallel_for(B, resolve_threads(threads), [&](int b) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(b));
    out(b) = replication(rng);
  });
  return out;
}

SlowBootstrap::SlowBootstrap(const GramContext& ctx, const OuterKernel& kernel,
                             const NullModel& model)
    : ctx_(ctx), kernel_(kernel), model_(model), theta_tilde_(fit(model, ctx)) {}

double SlowBootstrap::replication(Rng& rng) const {
  const Eigen::Index n = ctx_.n();
  const double nd = static_cast<double>(n);
  const Eigen::Index dim = ctx_.span_dim();
  const Eigen::Index r = theta_tilde_.lambda.size();

  // Fresh replicate from the fitted null, in the original span coordinates so
  // that fixed out-of-span parameters stay representable during the re-fit.
  Eigen::MatrixXd pts(n, dim);
  if (r == 0) {
    pts.setZero();
  } else {
    const Eigen::VectorXd sd = theta_tilde_.lambda.cwiseMax(0.0).cwiseSqrt();
    pts.noalias() = rng.normal_matrix(n, r) * sd.asDiagonal() *
                    theta_tilde_.dirs.transpose();
  }
  pts.rowwise() += theta_tilde_.mean.transpose();

  // Re-fit from scratch, through the full n x n eigendecomposition of the
  // replicate's centered Gram matrix - the cubic step that makes this scheme
  // the honest-cost reference.
  Eigen::MatrixXd gram = pts * pts.transpose();
  gram = 0.5 * (gram + gram.transpose());
  const auto eig = eigendecompose_centered(center_gram(gram));
  const Eigen::VectorXd& evals = eig.first;
  const Eigen::MatrixXd& evecs = eig.second;

  const Eigen::VectorXd rep_mean = pts.colwise().mean();
  const Eigen::MatrixXd centered = pts.rowwise() - rep_mean.transpose();
  const double top = evals.size() == 0 ? 0.0 : evals(0);
  Eigen::Index kept = 0;
  while (kept < evals.size() && evals(kept) > 1e-12 * top) ++kept;

  GaussianParam rep_param;
  rep_param.mean = rep_mean;
  rep_param.lambda = evals.head(kept);
  rep_param.dirs.resize(dim, kept);
  for (Eigen::Index s = 0; s < kept; ++s) {
    rep_param.dirs.col(s) =
        centered.transpose() * evecs.col(s) / std::sqrt(nd * evals(s));
  }
  const GaussianParam fitted = apply_T(model_, ctx_, rep_param);

  const Eigen::MatrixXd kbar = outer_kernel_matrix(kernel_, gram);
  const double t1 = kbar.sum() / (nd * nd);
  const double t2 = embed_eval_batch(kernel_, fitted, pts).mean();
  const double t3 = embed_norm_sq(kernel_, fitted);
  return clamp_replication(nd * (t1 - 2.0 * t2 + t3));
}

Eigen::VectorXd SlowBootstrap::run(int B, std::uint64_t seed,
                                   int threads) const {
  if (B < 1) {
    fail(ErrorKind::InvalidArgument,
         "replication count must be at least 1, got " + std::to_string(B));
  }
  Eigen::VectorXd out(B);
  parallel_for(B, resolve_threads(threads), [&](int b) {
    Rng rng =
        Rng::substream(seed, kSlowStreamTag | static_cast<std::uint64_t>(b));
    out(b) = replication(rng);
  });
  return out;
}

}  // namespace knt
