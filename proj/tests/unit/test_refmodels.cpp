#include <cmath>

#include <gtest/gtest.h>

#include "drlr/outer.hpp"
#include "drlr/refmodels.hpp"
#include "oracles.hpp"

namespace drlr {
namespace {

TEST(RefModels, Names) {
  EXPECT_EQ(to_string(ModelKind::LR), "lr");
  EXPECT_EQ(to_string(ModelKind::RLR), "rlr");
  EXPECT_EQ(to_string(ModelKind::DRLR), "drlr");
}

TEST(Accuracy, SignConventionAndErrors) {
  DenseMatrix x(4, 1);
  x << 1, -1, 0, 2;
  Vector y(4);
  y << 1, -1, 1, -1;
  const Dataset d(x, y);
  EXPECT_DOUBLE_EQ(accuracy(Vector::Ones(1), d), 0.75);
  // sign(0) = +1: every score is zero, so only positives count.
  EXPECT_DOUBLE_EQ(accuracy(Vector::Zero(1), d), 0.5);
  EXPECT_THROW(accuracy(Vector::Zero(2), d), std::invalid_argument);
}

TEST(Accuracy, ConstantFeatureZeroModelGivesMajorityFraction) {
  DenseMatrix x = DenseMatrix::Ones(10, 1);
  Vector y = Vector::Constant(10, -1.0);
  y.head(7).setOnes();
  const Dataset d(x, y);
  LinearClassifier m;
  m.beta = Vector::Zero(1);
  EXPECT_DOUBLE_EQ(accuracy(m, d), 0.7);
}

TEST(TrainLr, MatchesGradientDescentOracle) {
  const Dataset d = testing::synthetic(200, 4, 3);
  const auto model = train_lr(d);
  EXPECT_TRUE(model.converged);
  EXPECT_EQ(model.kind, ModelKind::LR);
  const double oracle = testing::logistic_oracle(d.signed_matrix().to_dense(), 200000);
  EXPECT_NEAR(lr_objective(model.beta, d), oracle, 1e-9);
  EXPECT_LE(lr_objective(model.beta, d), oracle + 1e-12);
}

TEST(TrainRlr, ProxResidualAndObjectiveOrdering) {
  const Dataset d = testing::synthetic(150, 5, 4);
  const auto lr = train_lr(d);
  for (double eps : {0.01, 0.1, 1.0}) {
    const auto rlr = train_rlr(d, eps);
    EXPECT_TRUE(rlr.converged) << eps;
    EXPECT_LE(rlr_prox_residual(rlr.beta, d, eps), 1e-8);
    EXPECT_LE(rlr_objective(rlr.beta, d, eps), rlr_objective(lr.beta, d, eps) + 1e-12);
    EXPECT_LE(rlr_objective(rlr.beta, d, eps), rlr_objective(Vector::Zero(5), d, eps) + 1e-12);
    EXPECT_EQ(rlr.hyperparams.at("epsilon"), eps);
  }
}

TEST(TrainRlr, LargeEpsilonGivesZero) {
  const Dataset d = testing::synthetic(100, 3, 5);
  // ||grad at 0||_1 is below eps, so zero is optimal.
  const auto rlr = train_rlr(d, 10.0);
  EXPECT_LE(norm_inf(rlr.beta), 1e-12);
  EXPECT_NEAR(rlr_objective(rlr.beta, d, 10.0), std::log(2.0), 1e-12);
}

TEST(TrainRlr, ObjectivesAreNotWorseThanRandomPerturbations) {
  const Dataset d = testing::synthetic(80, 3, 6);
  const double eps = 0.05;
  const auto rlr = train_rlr(d, eps);
  const double best = rlr_objective(rlr.beta, d, eps);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal(0.0, 0.01);
  for (int i = 0; i < 200; ++i) {
    Vector p = rlr.beta;
    for (Index j = 0; j < 3; ++j) p[j] += normal(gen);
    EXPECT_GE(rlr_objective(p, d, eps), best - 1e-12);
  }
}

TEST(KappaInfinity, DrlrMatchesRlr) {
  const Dataset d = testing::synthetic(100, 3, 8);
  DrlrConfig cfg;
  cfg.epsilon = 0.05;
  cfg.kappa = 1e6;
  const Solution s = golden_section_solve(d, cfg, BoxQpSolverKind::ActiveSetCg);
  const auto rlr = train_rlr(d, cfg.epsilon);
  const double ref = rlr_objective(rlr.beta, d, cfg.epsilon);
  EXPECT_NEAR(s.objective, ref, 1e-3 * ref);
}

}  // namespace
}  // namespace drlr
