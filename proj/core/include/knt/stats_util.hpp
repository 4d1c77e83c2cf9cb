// Small statistical utilities: normal cdf, Kolmogorov-Smirnov machinery.

#pragma once

#include <Eigen/Dense>

namespace knt {

double normal_cdf(double x);

// sup_x |F_a(x) - F_b(x)| between two empirical cdfs.
double two_sample_ks_statistic(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b);

// Asymptotic two-sided p-value for a two-sample KS statistic via the
// Kolmogorov distribution Q(lambda) = 2 sum_k (-1)^{k-1} exp(-2 k^2 lambda^2)
// with the standard finite-sample correction of the argument.
double two_sample_ks_pvalue(double stat, int n_a, int n_b);

}  // namespace knt
