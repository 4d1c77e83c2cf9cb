#include "knt/stats_util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "knt/errors.hpp"

namespace knt {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double two_sample_ks_statistic(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  if (a.size() == 0 || b.size() == 0) {
    fail(ErrorKind::InvalidArgument,
         "Kolmogorov-Smirnov statistic needs two nonempty samples");
  }
  std::vector<double> sa(a.data(), a.data() + a.size());
  std::vector<double> sb(b.data(), b.data() + b.size());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / na -
                                 static_cast<double>(j) / nb));
  }
  return sup;
}

double two_sample_ks_pvalue(double stat, int n_a, int n_b) {
  if (n_a <= 0 || n_b <= 0) {
    fail(ErrorKind::InvalidArgument,
         "Kolmogorov-Smirnov p-value needs positive sample sizes");
  }
  const double ne = static_cast<double>(n_a) * n_b / (n_a + n_b);
  const double sqrt_ne = std::sqrt(ne);
  // Stephens' finite-sample correction of the Kolmogorov argument.
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * stat;
  if (lambda < 1e-8) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-12 * std::max(std::abs(sum), 1e-300)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace knt
