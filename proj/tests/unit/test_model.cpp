#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "drlr/loss.hpp"
#include "drlr/model.hpp"
#include "oracles.hpp"

namespace drlr {
namespace {

Dataset single_sample() {
  DenseMatrix x(1, 2);
  x << 1.0, 0.0;
  return Dataset(x, Vector::Ones(1));
}

TEST(DataMatrix, DenseAndSparseAgree) {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  DenseMatrix a = DenseMatrix::Zero(9, 5);
  for (Index i = 0; i < 9; ++i)
    for (Index j = 0; j < 5; ++j)
      if ((i + 2 * j) % 3 == 0) a(i, j) = unif(gen);
  const DataMatrix dense(a);
  const DataMatrix sparse(SparseColMatrix(a.sparseView()));
  Vector x(5);
  Vector y(9);
  for (Index j = 0; j < 5; ++j) x[j] = unif(gen);
  for (Index i = 0; i < 9; ++i) y[i] = unif(gen);
  EXPECT_LE((dense.apply(x) - a * x).norm(), 1e-14);
  EXPECT_LE((sparse.apply(x) - a * x).norm(), 1e-14);
  EXPECT_LE((sparse.apply_transpose(y) - a.transpose() * y).norm(), 1e-14);
  for (Index j = 0; j < 5; ++j) {
    EXPECT_NEAR(sparse.column_dot(j, y), a.col(j).dot(y), 1e-14);
    EXPECT_NEAR(dense.column_sq_norms()[j], a.col(j).squaredNorm(), 1e-14);
    EXPECT_NEAR(sparse.column_sq_norms()[j], a.col(j).squaredNorm(), 1e-14);
  }
  Vector r = y;
  sparse.column_axpy(2, 0.5, r);
  EXPECT_LE((r - (y + 0.5 * a.col(2))).norm(), 1e-15);
  EXPECT_EQ(sparse.to_dense(), a);
}

TEST(Dataset, SignedMatrixIsExact) {
  DenseMatrix x(3, 2);
  x << 1, 2, 3, 4, 5, 6;
  Vector y(3);
  y << 1, -1, 1;
  const Dataset d(x, y);
  const DenseMatrix z = d.signed_matrix().to_dense();
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j) EXPECT_EQ(z(i, j), y[i] * x(i, j));
}

TEST(Dataset, RejectsBadInput) {
  EXPECT_THROW(Dataset(DenseMatrix::Ones(2, 2), Vector::Zero(2)), std::invalid_argument);
  EXPECT_THROW(Dataset(DenseMatrix::Ones(2, 2), Vector::Ones(3)), std::invalid_argument);
  EXPECT_THROW(Dataset(DenseMatrix::Ones(0, 2), Vector::Ones(0)), std::invalid_argument);
  EXPECT_THROW(Dataset(DenseMatrix::Ones(2, 0), Vector::Ones(2)), std::invalid_argument);
}

TEST(DrlrConfig, ValidatesInvariants) {
  DrlrConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.epsilon, 0.1);
  EXPECT_EQ(cfg.kappa, 1.0);
  EXPECT_EQ(cfg.rho0, 0.001);
  EXPECT_EQ(cfg.gamma, 1.05);
  EXPECT_EQ(cfg.primal_tol, 1e-6);
  cfg.gamma = 0.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = DrlrConfig{};
  cfg.epsilon = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = DrlrConfig{};
  cfg.rho0 = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(SubproblemInstance, LipschitzConstant) {
  const auto d = testing::synthetic(37, 3, 5);
  const SubproblemInstance inst(d, 0.2, 3.0);
  EXPECT_EQ(inst.lipschitz_f(), 1.0 / (4.0 * 37.0));
  EXPECT_DOUBLE_EQ(inst.center(), 0.6);
  EXPECT_THROW(SubproblemInstance(d, -0.1, 1.0), std::invalid_argument);
}

TEST(DrlrObjective, ZeroBeta) {
  const auto d = testing::synthetic(10, 3, 1);
  DrlrConfig cfg;
  EXPECT_NEAR(drlr_objective(Vector::Zero(3), 0.5, d, cfg), 0.05 + std::log(2.0), 1e-15);
}

TEST(DrlrObjective, InfeasibleIsSentinel) {
  const auto d = testing::synthetic(10, 3, 1);
  Vector beta = Vector::Zero(3);
  beta[1] = 0.6;
  EXPECT_TRUE(is_infeasible(drlr_objective(beta, 0.5, d, DrlrConfig{})));
  EXPECT_THROW(drlr_objective(Vector::Zero(2), 0.5, d, DrlrConfig{}), std::invalid_argument);
}

TEST(DrlrObjective, SingleSampleScalarFormula) {
  DrlrConfig cfg;
  cfg.epsilon = 0.1;
  cfg.kappa = 0.5;
  Vector beta(2);
  beta << 2.0, 0.0;
  const double expected = 0.2 + std::log1p(std::exp(-2.0)) + 1.0;
  EXPECT_NEAR(drlr_objective(beta, 2.0, single_sample(), cfg), expected, 1e-15);
  EXPECT_NEAR(expected, 1.326930, 5e-6);
}

TEST(SubproblemObjective, Examples) {
  const auto d = testing::synthetic(6, 2, 2);
  const SubproblemInstance inst(d, 0.5, 1.0);
  EXPECT_NEAR(subproblem_objective(Vector::Zero(2), Vector::Zero(6), inst), std::log(2.0), 1e-15);

  const SubproblemInstance one(single_sample(), 1.0, 1.0);
  EXPECT_NEAR(subproblem_objective(Vector::Zero(2), Vector::Ones(1), one), std::log1p(std::exp(-1.0)), 1e-15);
  EXPECT_NEAR(std::log1p(std::exp(-1.0)), 0.313262, 1e-6);

  EXPECT_TRUE(is_infeasible(subproblem_objective(Vector::Constant(2, 0.7), Vector::Zero(6), inst)));
}

TEST(SubproblemObjective, SplitIsExactOnManifold) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = testing::synthetic(20 + trial, 4, 100 + trial);
    DrlrConfig cfg;
    cfg.epsilon = 0.05 + 0.01 * trial;
    cfg.kappa = 0.5 + 0.1 * trial;
    const double lambda = 0.1 + 0.05 * trial;
    Vector beta(4);
    for (Index j = 0; j < 4; ++j) beta[j] = lambda * unif(gen);
    const SubproblemInstance inst(d, lambda, cfg.kappa);
    const Vector mu = d.signed_matrix().apply(beta);
    const double lhs = subproblem_objective(beta, mu, inst) + lambda * cfg.epsilon;
    const double rhs = drlr_objective(beta, lambda, d, cfg);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
    EXPECT_NEAR(subproblem_value(beta, inst), subproblem_objective(beta, mu, inst), 1e-15);
  }
}

TEST(DrlrObjective, JointlyConvexInLambdaAndBeta) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  const auto d = testing::synthetic(40, 3, 9);
  DrlrConfig cfg;
  for (int trial = 0; trial < 500; ++trial) {
    const double l1 = pos(gen);
    const double l2 = pos(gen);
    Vector b1(3);
    Vector b2(3);
    for (Index j = 0; j < 3; ++j) {
      b1[j] = l1 * unif(gen);
      b2[j] = l2 * unif(gen);
    }
    const double t = 0.5 * (unif(gen) + 1.0);
    const double lt = t * l1 + (1 - t) * l2;
    const Vector bt = project_linf_ball(t * b1 + (1 - t) * b2, lt);
    const double lhs = drlr_objective(bt, lt, d, cfg);
    const double rhs = t * drlr_objective(b1, l1, d, cfg) + (1 - t) * drlr_objective(b2, l2, d, cfg);
    EXPECT_LE(lhs, rhs + 1e-10);
  }
}

TEST(KktResidual, ZeroAtStationaryPointOfTheMuBlock) {
  const auto d = testing::synthetic(8, 3, 6);
  const SubproblemInstance inst(d, 0.3, 1.0);
  const double n = 8.0;
  // mu = 0 lies below the kink at 0.3, so dP(0) = -1/(2N) in every coordinate.
  const Vector p = Vector::Constant(8, -1.0 / (2.0 * n));
  const Vector w = -(grad_f(Vector::Zero(8)) + p);
  const KktResiduals r = kkt_residuals(Vector::Zero(3), Vector::Zero(8), w, inst);
  EXPECT_EQ(r.primal, 0.0);
  EXPECT_NEAR(r.mu_stationarity, 0.0, 1e-17);
  // beta = 0 is interior, so the normal cone is {0} and the residual is ||Z^T w||_inf.
  EXPECT_NEAR(r.beta_stationarity, norm_inf(d.signed_matrix().apply_transpose(w)), 1e-17);
  EXPECT_EQ(r.max(), std::max(r.mu_stationarity, r.beta_stationarity));
}

TEST(KktResidual, IntervalSubdifferentialAtKink) {
  DenseMatrix x(2, 1);
  x << 1.0, 1.0;
  const Dataset d(x, Vector::Ones(2));
  const SubproblemInstance inst(d, 1.0, 1.0);
  const Vector mu = Vector::Ones(2);  // exactly at the kink
  const Vector g = grad_f(mu);
  // -w - grad f must lie in [-1/4, 1/4] per coordinate (weight 1/(2N) = 1/4).
  Vector w = -(g + Vector::Constant(2, 0.2));
  EXPECT_NEAR(kkt_residuals(Vector::Ones(1), mu, w, inst).mu_stationarity, 0.0, 1e-17);
  w = -(g + Vector::Constant(2, 0.3));
  EXPECT_NEAR(kkt_residuals(Vector::Ones(1), mu, w, inst).mu_stationarity, 0.05, 1e-15);
}

TEST(KktResidual, NormalConeAtBound) {
  DenseMatrix x(1, 1);
  x << 1.0;
  const Dataset d(x, Vector::Ones(1));
  const SubproblemInstance inst(d, 0.5, 1.0);
  const Vector beta = Vector::Constant(1, 0.5);
  // Z^T w = w must be >= 0 at beta = +lambda.
  EXPECT_EQ(kkt_residuals(beta, Vector::Constant(1, 0.5), Vector::Constant(1, 0.2), inst).beta_stationarity, 0.0);
  EXPECT_NEAR(kkt_residuals(beta, Vector::Constant(1, 0.5), Vector::Constant(1, -0.2), inst).beta_stationarity, 0.2, 1e-16);
}

TEST(KktResidual, PositiveAtRandomTriples) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal;
  const auto d = testing::synthetic(15, 3, 7);
  const SubproblemInstance inst(d, 0.4, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector beta(3);
    Vector mu(15);
    Vector w(15);
    for (Index j = 0; j < 3; ++j) beta[j] = 0.4 * std::tanh(normal(gen));
    for (Index i = 0; i < 15; ++i) {
      mu[i] = normal(gen);
      w[i] = normal(gen);
    }
    EXPECT_GT(kkt_residual(beta, mu, w, inst), 0.0);
  }
}

TEST(KktResidual, SmallAtReferenceOptimum) {
  const auto d = testing::synthetic(20, 3, 21);
  const SubproblemInstance inst(d, 0.3, 1.0);
  const auto ref = testing::reference_solve(inst);
  EXPECT_LE(kkt_residual(ref.solution.beta, ref.mu, ref.w, inst), 1e-6);
}

}  // namespace
}  // namespace drlr
