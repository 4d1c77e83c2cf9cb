// Dataset ingestion, Gram-matrix construction/centering, and the sample-span
// coordinate system every other computation works in.
//
// A sample Y_1..Y_n may arrive either as explicit vectors (rows of an n-by-d
// matrix) or as a Gram matrix of pairwise inner products.  Both are reduced to
// a common representation: an orthonormal coordinate system for the subspace
// the computation lives in ("span coordinates").  In vector mode the ambient
// coordinates are kept as-is (so externally supplied parameters outside the
// sample span remain representable); in gram mode coordinates are recovered by
// factoring the Gram matrix, which is possible exactly because it is PSD.

#pragma once

#include <Eigen/Dense>
#include <utility>

#include "knt/errors.hpp"

namespace knt {

struct Dataset {
  enum class Mode { Vectors, Gram };

  Mode mode = Mode::Vectors;
  // Vectors: n x d, one observation per row.  Gram: symmetric PSD n x n.
  Eigen::MatrixXd data;

  static Dataset vectors(Eigen::MatrixXd x) {
    return Dataset{Mode::Vectors, std::move(x)};
  }
  static Dataset gram(Eigen::MatrixXd k) {
    return Dataset{Mode::Gram, std::move(k)};
  }
};

// K = [<Y_i, Y_j>] from explicit observations.  Errors on non-finite input.
Eigen::MatrixXd gram_from_vectors(const Eigen::MatrixXd& x);

// K_c = H K H with H = I - (1/n) 11^T.  Errors if K is asymmetric beyond
// 1e-10 relative.
Eigen::MatrixXd center_gram(const Eigen::MatrixXd& k);

// Full eigendecomposition of a centered Gram matrix: K_c u_s = n lambda_s u_s
// with lambda_s sorted descending and tiny negative values (>= -1e-8 * max)
// clamped to zero.  Returns all n eigenpairs; columns of the second member are
// the orthonormal u_s.  This is the O(n^3) route used by the classical
// bootstrap refit; GramContext itself uses an equivalent span-coordinate
// factorization.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> eigendecompose_centered(
    const Eigen::MatrixXd& k_c);

// Immutable per-sample workspace: Gram matrices, span coordinates, and the
// spectrum of the empirical covariance operator (1/n convention).
class GramContext {
 public:
  explicit GramContext(const Dataset& dataset);

  int n() const { return static_cast<int>(coords_.rows()); }
  // Dimension of the span coordinate system (ambient d in vector mode, the
  // numerical rank of K in gram mode).
  int span_dim() const { return static_cast<int>(coords_.cols()); }
  bool vectors_mode() const { return vectors_mode_; }

  const Eigen::MatrixXd& gram() const { return k_; }
  const Eigen::MatrixXd& centered_gram() const { return k_c_; }

  // Row i = Y_i in span coordinates; <z_i, z_j> reproduces K_ij.
  const Eigen::MatrixXd& coords() const { return coords_; }
  // Empirical mean in span coordinates.
  const Eigen::VectorXd& mean() const { return mean_; }

  // Positive covariance eigenvalues, descending (values below
  // 1e-12 * lambda_1 are dropped); the remaining n - rank eigenvalues are 0.
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  double eigenvalue(int s) const {
    return s < lambda_.size() ? lambda_(s) : 0.0;
  }
  int spectrum_rank() const { return static_cast<int>(lambda_.size()); }
  // Orthonormal covariance eigendirections (span coordinates), one column per
  // retained eigenvalue.
  const Eigen::MatrixXd& directions() const { return dirs_; }

  // Eigenvectors u_s of K_c (K_c u_s = n lambda_s u_s), reconstructed from
  // the span-coordinate spectrum: (u_s)_i = <z_i - mean, psi_s>/sqrt(n l_s).
  Eigen::MatrixXd centered_eigenvectors() const;

 private:
  bool vectors_mode_ = true;
  Eigen::MatrixXd k_;
  Eigen::MatrixXd k_c_;
  Eigen::MatrixXd coords_;
  Eigen::VectorXd mean_;
  Eigen::VectorXd lambda_;
  Eigen::MatrixXd dirs_;
};

// A Gaussian parameter theta = (mean, covariance) over the span coordinate
// system, the covariance held spectrally: lambda (descending) with orthonormal
// direction columns.  Fitted parameters carry lambda >= 0; parameters built
// inside the finite-difference linearization may carry tiny signed
// eigenvalues, for which every closed form used here remains analytic.
struct GaussianParam {
  Eigen::VectorXd mean;    // span coordinates, length span_dim
  Eigen::VectorXd lambda;  // descending
  Eigen::MatrixXd dirs;    // span_dim x lambda.size(), orthonormal columns
};

// q_i(c) = ||(I + c Sigma)^{-1/2}(p_i - mean)||^2 for each row p_i of pts,
// computed spectrally:
//   q_i(c) = ||p_i - m||^2 + sum_s (1/(1 + c lambda_s) - 1) <p_i - m, psi_s>^2.
// Errors if any 1 + c lambda_s <= 0.
Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& pts,
                                const GaussianParam& param, double c);
// Convenience: quadratic forms at the sample points of a context.
Eigen::VectorXd quadratic_forms(const GramContext& ctx,
                                const GaussianParam& param, double c);

// log|I + c Sigma| = sum_s log(1 + c lambda_s); 0 for an empty spectrum.
// Errors if any factor is <= 0.
double log_det_shift(const Eigen::VectorXd& lambda, double c);

}  // namespace knt
