// Closed-form RKHS embeddings of Gaussian measures.
//
// For an outer kernel kbar on the sample space, the embedding of N(m, Sigma)
// is the RKHS element N(m,Sigma)(y) = E kbar(Z, y), Z ~ N(m, Sigma).  Two
// kernels admit closed forms:
//
//   gaussian    kbar(x,y) = exp(-sigma ||x-y||^2)
//     N(y)      = |I + 2s Sigma|^{-1/2} exp(-s ||(I + 2s Sigma)^{-1/2}(y-m)||^2)
//     ||N||^2   = |I + 4s Sigma|^{-1/2}
//     <N1,N2>   = |I + 2s S|^{-1/2} exp(-s d^T (I + 2s S)^{-1} d),
//                 S = Sigma1 + Sigma2, d = m1 - m2
//
//   exponential kbar(x,y) = exp(<x,y>)
//     N(y)      = exp(<m,y> + (1/2) y^T Sigma y)
//     ||N||^2   = |I - Sigma^2|^{-1/2} exp(m^T (I - Sigma)^{-1} m)
//     <N1,N2>   = |I - Sigma2 Sigma1|^{-1/2} exp(<m1,m2> + (1/2) m1^T Sigma2 m1
//                 + (1/2) b^T Sigma1 (I - Sigma2 Sigma1)^{-1} b),
//                 b = m2 + Sigma2 m1
//
// The exponential forms require the relevant spectra to stay strictly below 1
// (largest eigenvalue of Sigma for the norm, spectral radius of Sigma2 Sigma1
// for the cross term); violations raise a precondition error naming the
// offending eigenvalue.  Every formula is certified against brute-force
// Monte-Carlo oracles in the test suite.

#pragma once

#include <Eigen/Dense>

#include "knt/gram.hpp"

namespace knt {

struct OuterKernel {
  enum class Kind { Gaussian, Exponential };

  Kind kind = Kind::Gaussian;
  double sigma = 0.5;  // gaussian bandwidth; unused for exponential

  static OuterKernel gaussian(double sigma);
  static OuterKernel exponential();
};

// Kbar_ij = kbar(Y_i, Y_j), built from Gram entries only:
// ||Y_i - Y_j||^2 = K_ii + K_jj - 2 K_ij and <Y_i, Y_j> = K_ij.
Eigen::MatrixXd outer_kernel_matrix(const OuterKernel& kernel,
                                    const Eigen::MatrixXd& gram);
Eigen::MatrixXd outer_kernel_matrix(const OuterKernel& kernel,
                                    const GramContext& ctx);

// N(m,Sigma)(y) for y in span coordinates.
double embed_eval(const OuterKernel& kernel, const GaussianParam& param,
                  const Eigen::VectorXd& y);
// N(m,Sigma) evaluated at each row of pts.
Eigen::VectorXd embed_eval_batch(const OuterKernel& kernel,
                                 const GaussianParam& param,
                                 const Eigen::MatrixXd& pts);

// ||N(m,Sigma)||^2 in the RKHS of the outer kernel.
double embed_norm_sq(const OuterKernel& kernel, const GaussianParam& param);

// <N(theta1), N(theta2)>; symmetric, and equals embed_norm_sq on the diagonal.
double embed_cross_inner(const OuterKernel& kernel, const GaussianParam& theta1,
                         const GaussianParam& theta2);

// Bandwidth default for the gaussian kernel: 1 / (2 * median of pairwise
// squared distances), computed from Gram entries.
double median_heuristic_sigma(const GramContext& ctx);

}  // namespace knt
