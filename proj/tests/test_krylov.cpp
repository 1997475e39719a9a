#include <gtest/gtest.h>

#include <random>

#include <Eigen/Dense>

#include "biot/krylov.hpp"

using namespace biot;

namespace {

LinearOperator dense_op(const Eigen::MatrixXd& a) {
  return [a](const Vec& x, Vec& y) { y = a * x; };
}

Eigen::MatrixXd random_matrix(int n, unsigned seed, double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng) / std::sqrt(double(n));
  a.diagonal().array() += shift;
  return a;
}

Vec random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// Oracle: minimal residual over x0 + K_k(A, r0), by least squares on an
// explicitly orthonormalized Krylov basis.
double gmres_oracle_residual(const Eigen::MatrixXd& a, const Vec& b, const Vec& x0, int k) {
  const Vec r0 = b - a * x0;
  Eigen::MatrixXd v(a.rows(), k);
  Vec q = r0;
  for (int j = 0; j < k; ++j) {
    v.col(j) = q;
    q = a * q;
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), k);
  const Eigen::MatrixXd ab = a * basis;
  const Vec y = ab.colPivHouseholderQr().solve(r0);
  return (r0 - ab * y).norm();
}

Eigen::MatrixXd laplacian_1d(int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i > 0) a(i, i - 1) = -1.0;
    if (i + 1 < n) a(i, i + 1) = -1.0;
  }
  return a;
}

}  // namespace

TEST(Fgmres, ResidualHistoryMatchesMinimalResidualOracle) {
  const int n = 40;
  const Eigen::MatrixXd a = random_matrix(n, 3, 2.0);
  const Vec b = random_vector(n, 4);
  Vec x = Vec::Zero(n);
  KrylovOptions opts;
  opts.tol = 1e-12;
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), b, x, opts);
  ASSERT_TRUE(rep.converged);
  for (int k = 1; k <= std::min(8, rep.iterations); ++k)
    EXPECT_NEAR(rep.relative_residuals[k], gmres_oracle_residual(a, b, Vec::Zero(n), k) / b.norm(), 1e-10) << k;
  EXPECT_LT((a * x - b).norm() / b.norm(), 1e-11);
}

TEST(Fgmres, ResidualsNonIncreasing) {
  const Eigen::MatrixXd a = random_matrix(60, 9, 1.5);
  const Vec b = random_vector(60, 10);
  Vec x = Vec::Zero(60);
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), b, x);
  for (std::size_t i = 1; i < rep.relative_residuals.size(); ++i)
    EXPECT_LE(rep.relative_residuals[i], rep.relative_residuals[i - 1] * (1.0 + 1e-12));
}

TEST(Fgmres, ExactPreconditionerConvergesInOneStep) {
  const Eigen::MatrixXd a = random_matrix(30, 1, 3.0);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  const Vec b = random_vector(30, 2);
  Vec x = Vec::Zero(30);
  const SolverReport rep = fgmres(dense_op(a), [&](const Vec& r, Vec& z) { z = lu.solve(r); }, b, x);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 1);
}

TEST(Fgmres, ZeroRightHandSideUsesInitialResidual) {
  const Eigen::MatrixXd a = random_matrix(25, 5, 2.0);
  Vec x = random_vector(25, 6);
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), Vec::Zero(25), x);
  EXPECT_TRUE(rep.converged);
  EXPECT_DOUBLE_EQ(rep.relative_residuals.front(), 1.0);
  EXPECT_LT((a * x).norm(), 1e-7);
}

TEST(Fgmres, ZeroProblemTakesNoIterations) {
  const Eigen::MatrixXd a = random_matrix(10, 5, 2.0);
  Vec x = Vec::Zero(10);
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), Vec::Zero(10), x);
  EXPECT_TRUE(rep.converged);
  EXPECT_EQ(rep.iterations, 0);
  EXPECT_EQ(x.norm(), 0.0);
}

TEST(Fgmres, RestartStillConverges) {
  const Eigen::MatrixXd a = random_matrix(50, 7, 2.5);
  const Vec b = random_vector(50, 8);
  Vec x = Vec::Zero(50);
  KrylovOptions opts;
  opts.restart = 5;
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), b, x, opts);
  EXPECT_TRUE(rep.converged);
  EXPECT_LT((a * x - b).norm() / b.norm(), 1e-8);
}

TEST(Fgmres, ReportsMaxIter) {
  const Eigen::MatrixXd a = laplacian_1d(200);
  Vec x = Vec::Zero(200);
  KrylovOptions opts;
  opts.max_iter = 3;
  const SolverReport rep = fgmres(dense_op(a), identity_operator(), Vec::Ones(200), x, opts);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.iterations, 3);
  EXPECT_EQ(rep.message, "max_iter");
}

TEST(Pcg, SolvesLaplacianWithinNSteps) {
  const int n = 50;
  const Eigen::MatrixXd a = laplacian_1d(n);
  const Vec b = random_vector(n, 1);
  Vec x = Vec::Zero(n);
  KrylovOptions opts;
  opts.tol = 1e-10;
  const SolverReport rep = pcg(dense_op(a), identity_operator(), b, x, opts);
  EXPECT_TRUE(rep.converged);
  EXPECT_LE(rep.iterations, n);
  EXPECT_LT((a * x - b).norm() / b.norm(), 1e-10);
}

TEST(Pcg, JacobiOnScaledSystemIsExact) {
  Vec d(6);
  d << 1, 10, 100, 1e3, 1e4, 1e5;
  const Eigen::MatrixXd a = d.asDiagonal();
  Vec x = Vec::Zero(6);
  const SolverReport rep =
      pcg(dense_op(a), [&](const Vec& r, Vec& z) { z = r.cwiseQuotient(d); }, Vec::Ones(6), x);
  EXPECT_EQ(rep.iterations, 1);
}

TEST(Pcg, DetectsIndefiniteOperator) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(4, 4);
  a(2, 2) = -1.0;
  Vec x = Vec::Zero(4);
  Vec b = Vec::Zero(4);
  b(2) = 1.0;
  const SolverReport rep = pcg(dense_op(a), identity_operator(), b, x);
  EXPECT_FALSE(rep.converged);
  EXPECT_EQ(rep.message, "indefinite");
}
