#include "knt/gram.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "knt/errors.hpp"
#include "knt/rng.hpp"

namespace knt {
namespace {

TEST(GramFromVectors, OrthonormalRows) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 0, 0, 1;
  const Eigen::MatrixXd k = gram_from_vectors(x);
  Eigen::MatrixXd want(2, 2);
  want << 1, 0, 0, 1;
  EXPECT_TRUE(k.isApprox(want, 1e-15));
}

TEST(GramFromVectors, DirectDotProducts) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, 3, 4;
  const Eigen::MatrixXd k = gram_from_vectors(x);
  Eigen::MatrixXd want(2, 2);
  want << 5, 11, 11, 25;
  EXPECT_TRUE(k.isApprox(want, 1e-15));
}

TEST(GramFromVectors, MatchesDenseProductOracle) {
  Rng rng(11);
  const Eigen::MatrixXd x = rng.normal_matrix(5, 3);
  const Eigen::MatrixXd k = gram_from_vectors(x);
  // Element-wise dot products, written out without matrix algebra.
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      double dot = 0;
      for (int c = 0; c < 3; ++c) dot += x(i, c) * x(j, c);
      EXPECT_NEAR(k(i, j), dot, 1e-12);
    }
  }
  EXPECT_TRUE(k.isApprox(k.transpose(), 1e-12));
}

TEST(GramFromVectors, NonFiniteEntriesError) {
  Eigen::MatrixXd x(2, 2);
  x << 1, 2, std::nan(""), 4;
  try {
    gram_from_vectors(x);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidData);
  }
}

TEST(CenterGram, AllOnesCentersToZero) {
  const Eigen::MatrixXd k = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_LT(center_gram(k).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(CenterGram, IdempotentOnCenteredData) {
  Rng rng(3);
  Eigen::MatrixXd x = rng.normal_matrix(6, 2);
  x.rowwise() -= x.colwise().mean();
  const Eigen::MatrixXd k = gram_from_vectors(x);
  EXPECT_TRUE(center_gram(k).isApprox(k, 1e-10));
}

TEST(CenterGram, MatchesExplicitCenteringOracle) {
  Rng rng(5);
  const Eigen::MatrixXd x = rng.normal_matrix(7, 3);
  Eigen::MatrixXd xc = x;
  xc.rowwise() -= x.colwise().mean();
  EXPECT_TRUE(center_gram(gram_from_vectors(x))
                  .isApprox(gram_from_vectors(xc), 1e-10));
}

TEST(CenterGram, AsymmetricInputErrors) {
  Eigen::MatrixXd k(2, 2);
  k << 1, 0.5, 0.2, 1;
  try {
    center_gram(k);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidData);
  }
}

TEST(EigendecomposeCentered, NullOperator) {
  const auto [lambda, u] = eigendecompose_centered(Eigen::MatrixXd::Zero(4, 4));
  EXPECT_LT(lambda.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(EigendecomposeCentered, TwoPointOneDim) {
  Eigen::MatrixXd x(2, 1);
  x << -1, 1;
  const auto [lambda, u] =
      eigendecompose_centered(center_gram(gram_from_vectors(x)));
  // Sample variance with the 1/n convention: ((-1)^2 + 1^2)/2 = 1.
  EXPECT_NEAR(lambda(0), 1.0, 1e-12);
  for (int s = 1; s < lambda.size(); ++s) EXPECT_NEAR(lambda(s), 0.0, 1e-12);
}

TEST(EigendecomposeCentered, TraceIdentityAndEigenEquation) {
  Rng rng(8);
  const Eigen::MatrixXd x = rng.normal_matrix(9, 4);
  const Eigen::MatrixXd kc = center_gram(gram_from_vectors(x));
  const auto [lambda, u] = eigendecompose_centered(kc);
  EXPECT_NEAR(lambda.sum(), kc.trace() / 9.0, 1e-8 * std::abs(kc.trace()));
  for (int s = 0; s < 3; ++s) {
    const Eigen::VectorXd resid = kc * u.col(s) - 9.0 * lambda(s) * u.col(s);
    EXPECT_LT(resid.norm(), 1e-8 * (1.0 + 9.0 * lambda(s)));
  }
  for (int s = 1; s < lambda.size(); ++s) EXPECT_GE(lambda(s - 1), lambda(s));
}

TEST(GramContext, VectorAndGramModesAgree) {
  Rng rng(21);
  const Eigen::MatrixXd x = rng.normal_matrix(10, 3);
  const GramContext vec(Dataset::vectors(x));
  const GramContext grm(Dataset::gram(gram_from_vectors(x)));
  EXPECT_TRUE(vec.gram().isApprox(grm.gram(), 1e-10));
  EXPECT_TRUE(vec.centered_gram().isApprox(grm.centered_gram(), 1e-10));
  ASSERT_EQ(vec.spectrum_rank(), grm.spectrum_rank());
  EXPECT_TRUE(vec.eigenvalues().isApprox(grm.eigenvalues(), 1e-8));
  // Span coordinates differ by an orthogonal change of basis but must
  // reproduce the same inner products.
  EXPECT_TRUE((grm.coords() * grm.coords().transpose())
                  .isApprox(vec.gram(), 1e-8));
}

TEST(GramContext, CenteredGramInvariantUnderConstantShift) {
  Rng rng(2);
  const Eigen::MatrixXd x = rng.normal_matrix(8, 2);
  Eigen::MatrixXd shifted = x;
  shifted.rowwise() += Eigen::RowVector2d(3.5, -1.25);
  const GramContext a(Dataset::vectors(x));
  const GramContext b(Dataset::vectors(shifted));
  EXPECT_TRUE(a.centered_gram().isApprox(b.centered_gram(), 1e-9));
}

TEST(GramContext, NonSquareGramErrors) {
  try {
    GramContext ctx(Dataset::gram(Eigen::MatrixXd::Zero(2, 3)));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidData);
    EXPECT_NE(std::string(e.what()).find("must be square"), std::string::npos);
  }
}

GaussianParam empirical_like(const GramContext& ctx) {
  GaussianParam p;
  p.mean = ctx.mean();
  p.lambda = ctx.eigenvalues();
  p.dirs = ctx.directions();
  return p;
}

TEST(QuadraticForms, ZeroShiftIsSquaredDistanceToMean) {
  Rng rng(31);
  const Eigen::MatrixXd x = rng.normal_matrix(6, 3);
  const GramContext ctx(Dataset::vectors(x));
  const GaussianParam p = empirical_like(ctx);
  const Eigen::VectorXd q = quadratic_forms(ctx, p, 0.0);
  for (int i = 0; i < 6; ++i) {
    EXPECT_NEAR(q(i), (ctx.coords().row(i).transpose() - p.mean).squaredNorm(),
                1e-10);
  }
}

TEST(QuadraticForms, EmptySpectrumIgnoresShift) {
  Rng rng(32);
  const Eigen::MatrixXd x = rng.normal_matrix(5, 2);
  const GramContext ctx(Dataset::vectors(x));
  GaussianParam p = empirical_like(ctx);
  p.lambda.resize(0);
  p.dirs.resize(p.dirs.rows(), 0);
  EXPECT_TRUE(quadratic_forms(ctx, p, 7.5).isApprox(
      quadratic_forms(ctx, p, 0.0), 1e-12));
}

TEST(QuadraticForms, MatchesDenseInverseOracle) {
  Rng rng(33);
  const Eigen::MatrixXd x = rng.normal_matrix(6, 3);
  const GramContext ctx(Dataset::vectors(x));
  const GaussianParam p = empirical_like(ctx);
  const double c = 1.7;
  const Eigen::MatrixXd sigma =
      p.dirs * p.lambda.asDiagonal() * p.dirs.transpose();
  const Eigen::MatrixXd shift_inv =
      (Eigen::MatrixXd::Identity(3, 3) + c * sigma).inverse();
  const Eigen::VectorXd q = quadratic_forms(ctx, p, c);
  for (int i = 0; i < 6; ++i) {
    const Eigen::VectorXd centered = ctx.coords().row(i).transpose() - p.mean;
    EXPECT_NEAR(q(i), centered.dot(shift_inv * centered), 1e-8);
  }
}

TEST(QuadraticForms, PermutationEquivariant) {
  Rng rng(34);
  const Eigen::MatrixXd x = rng.normal_matrix(6, 2);
  const GramContext ctx(Dataset::vectors(x));
  const GaussianParam p = empirical_like(ctx);
  const Eigen::VectorXd q = quadratic_forms(ctx.coords(), p, 0.8);
  Eigen::MatrixXd rev = x.colwise().reverse();
  const GramContext rctx(Dataset::vectors(rev));
  // Same parameter expressed over the same ambient coordinates.
  const Eigen::VectorXd qr = quadratic_forms(rctx.coords(), p, 0.8);
  EXPECT_TRUE(qr.reverse().isApprox(q, 1e-10));
}

TEST(QuadraticForms, NonpositiveFactorErrors) {
  Rng rng(35);
  const Eigen::MatrixXd x = rng.normal_matrix(5, 2);
  const GramContext ctx(Dataset::vectors(x));
  const GaussianParam p = empirical_like(ctx);
  const double c = -1.0 / p.lambda(0) * 1.0001;  // 1 + c lambda_1 < 0
  try {
    quadratic_forms(ctx, p, c);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOperator);
  }
}

TEST(LogDetShift, ZeroShiftAndEmptySpectrum) {
  EXPECT_EQ(log_det_shift(Eigen::VectorXd(), 3.0), 0.0);
  Eigen::VectorXd lambda(2);
  lambda << 1.0, 0.5;
  EXPECT_EQ(log_det_shift(lambda, 0.0), 0.0);
}

TEST(LogDetShift, DirectProduct) {
  Eigen::VectorXd lambda(2);
  lambda << 1.0, 0.5;
  EXPECT_NEAR(log_det_shift(lambda, 2.0), std::log(6.0), 1e-12);
}

TEST(LogDetShift, MatchesDenseDeterminantOracle) {
  Rng rng(36);
  const Eigen::MatrixXd x = rng.normal_matrix(8, 3);
  const GramContext ctx(Dataset::vectors(x));
  const GaussianParam p = empirical_like(ctx);
  const double c = 2.3;
  const Eigen::MatrixXd sigma =
      p.dirs * p.lambda.asDiagonal() * p.dirs.transpose();
  const double dense = std::log(
      (Eigen::MatrixXd::Identity(3, 3) + c * sigma).determinant());
  EXPECT_NEAR(log_det_shift(p.lambda, c), dense, 1e-8 * std::abs(dense));
}

TEST(LogDetShift, NonpositiveFactorErrors) {
  Eigen::VectorXd lambda(1);
  lambda << 2.0;
  try {
    log_det_shift(lambda, -0.5);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularOperator);
  }
}

}  // namespace
}  // namespace knt
