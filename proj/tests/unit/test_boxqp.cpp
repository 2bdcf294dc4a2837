#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "drlr/boxqp.hpp"
#include "oracles.hpp"

namespace drlr {
namespace {

constexpr BoxQpSolverKind kAll[] = {BoxQpSolverKind::Apg, BoxQpSolverKind::Coordinate,
                                    BoxQpSolverKind::ActiveSetCg};

std::shared_ptr<const DataMatrix> dense(const DenseMatrix& a) {
  return std::make_shared<const DataMatrix>(a);
}

class BoxQpSolvers : public ::testing::TestWithParam<BoxQpSolverKind> {};

TEST(SpectralBound, DiagonalAndIdentity) {
  DenseMatrix a = DenseMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 1.0;
  const double b = estimate_spectral_bound(DataMatrix(a));
  EXPECT_NEAR(b, 4.0 * 1.01, 1e-8);
  EXPECT_NEAR(1.0 / b, 0.2475, 1e-4);
  EXPECT_NEAR(estimate_spectral_bound(DataMatrix(DenseMatrix::Identity(3, 3))), 1.01, 1e-8);
  EXPECT_EQ(estimate_spectral_bound(DataMatrix(DenseMatrix::Zero(4, 2))), 1e-30);
}

TEST(SpectralBound, WithinOnePercentOfEigendecomposition) {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    DenseMatrix a(5, 3);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 3; ++j) a(i, j) = normal(gen);
    const Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a.transpose() * a);
    const double oracle = eig.eigenvalues().maxCoeff();
    const double est = estimate_spectral_bound(DataMatrix(a));
    EXPECT_GE(est, oracle * (1 - 1e-6));
    EXPECT_LE(est, oracle * 1.01 * (1 + 1e-6));
  }
}

TEST(SolverNames, RoundTrip) {
  for (auto k : kAll) EXPECT_EQ(parse_box_qp_solver(to_string(k)), k);
  EXPECT_EQ(parse_box_qp_solver("coord"), BoxQpSolverKind::Coordinate);
  EXPECT_THROW(parse_box_qp_solver("newton"), std::invalid_argument);
}

TEST_P(BoxQpSolvers, IdentityClampsUnconstrainedSolution) {
  Vector b(2);
  b << 3.0, 0.2;
  const auto p = BoxQpProblem::make(dense(DenseMatrix::Identity(2, 2)), b, 1.0);
  const auto r = solve_box_qp(GetParam(), p, Vector::Zero(2), 1e-10, 1000);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x[0], 1.0, 1e-10);
  EXPECT_NEAR(r.x[1], 0.2, 1e-10);
}

TEST_P(BoxQpSolvers, SeparableExample) {
  Vector b(2);
  b << 0.5, -2.0;
  const auto p = BoxQpProblem::make(dense(DenseMatrix::Identity(2, 2)), b, 1.0);
  const auto r = solve_box_qp(GetParam(), p, Vector::Zero(2), 1e-12, 1000);
  EXPECT_NEAR(r.x[0], 0.5, 1e-12);
  EXPECT_EQ(r.x[1], -1.0);
}

TEST_P(BoxQpSolvers, ZeroRightHandSideStaysAtZero) {
  std::mt19937_64 gen(3);
  const DenseMatrix a = testing::conditioned_matrix(gen, 8, 3, 10.0);
  const auto p = BoxQpProblem::make(dense(a), Vector::Zero(8), 1.0);
  const auto r = solve_box_qp(GetParam(), p, Vector::Zero(3), 1e-10, 10);
  EXPECT_EQ(r.x, Vector::Zero(3));
  EXPECT_LE(r.iterations, 1);
}

TEST_P(BoxQpSolvers, RadiusZeroReturnsZero) {
  std::mt19937_64 gen(4);
  const DenseMatrix a = testing::conditioned_matrix(gen, 8, 3, 10.0);
  const auto p = BoxQpProblem::make(dense(a), Vector::Ones(8), 0.0);
  const auto r = solve_box_qp(GetParam(), p, Vector::Zero(3), 1e-10, 100);
  EXPECT_EQ(r.x, Vector::Zero(3));
}

TEST_P(BoxQpSolvers, InteriorOptimumMatchesNormalEquations) {
  std::mt19937_64 gen(5);
  const DenseMatrix a = testing::conditioned_matrix(gen, 10, 4, 5.0);
  Vector xs(4);
  xs << 0.3, -0.2, 0.1, 0.05;
  Vector b = a * xs;
  b += 0.01 * Vector::LinSpaced(10, -1.0, 1.0);
  const Vector oracle = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  ASSERT_LT(norm_inf(oracle), 1.0);
  const auto p = BoxQpProblem::make(dense(a), b, 1.0);
  const auto r = solve_box_qp(GetParam(), p, Vector::Zero(4), 1e-12, 100000);
  EXPECT_LE((r.x - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST_P(BoxQpSolvers, MatchesActiveSetEnumeration) {
  std::mt19937_64 gen(6);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + trial % 5;
    const Index m = n + 3 + trial % 7;
    const DenseMatrix a = testing::conditioned_matrix(gen, m, n, 1.0 + 10.0 * trial);
    Vector b(m);
    for (Index i = 0; i < m; ++i) b[i] = 2.0 * normal(gen);
    const double r = 0.3;
    const Vector oracle = testing::box_qp_enumerate(a, b, r);
    ASSERT_EQ(oracle.size(), n);
    const auto p = BoxQpProblem::make(dense(a), b, r);
    const auto res = solve_box_qp(GetParam(), p, Vector::Zero(n), 1e-12, 200000);
    EXPECT_LE((res.x - oracle).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
    EXPECT_LE(norm_inf(res.x), r);
  }
}

TEST_P(BoxQpSolvers, AlreadyOptimalStartDoesNotMove) {
  std::mt19937_64 gen(7);
  const DenseMatrix a = testing::conditioned_matrix(gen, 12, 4, 3.0);
  Vector b = a * Vector::Constant(4, 2.0);
  const auto p = BoxQpProblem::make(dense(a), b, 1.0);
  const Vector x0 = testing::box_qp_enumerate(a, b, 1.0);
  const auto r = solve_box_qp(GetParam(), p, x0, 1e-8, 1000);
  EXPECT_LE((r.x - x0).cwiseAbs().maxCoeff(), 1e-10);
}

TEST_P(BoxQpSolvers, ReturnedObjectiveNeverExceedsStart) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const DenseMatrix a = testing::conditioned_matrix(gen, 15, 5, 1e3);
    Vector b(15);
    for (Index i = 0; i < 15; ++i) b[i] = normal(gen);
    Vector x0(5);
    for (Index j = 0; j < 5; ++j) x0[j] = 0.5 * std::tanh(normal(gen));
    const auto p = BoxQpProblem::make(dense(a), b, 0.5);
    // A short budget exercises the best-so-far path.
    const auto r = solve_box_qp(GetParam(), p, x0, 1e-14, 3);
    EXPECT_LE(p.objective(r.x), p.objective(x0) + 1e-12);
    EXPECT_LE(norm_inf(r.x), 0.5);
  }
}

TEST(BoxQp, ZeroColumnIsSkippedByCoordinateDescent) {
  DenseMatrix a = DenseMatrix::Zero(3, 2);
  a(0, 0) = 1.0;
  a(1, 0) = 1.0;
  Vector b(3);
  b << 0.4, 0.4, 5.0;
  const auto p = BoxQpProblem::make(dense(a), b, 1.0);
  Vector x0(2);
  x0 << 0.0, 0.7;
  const auto r = solve_coordinate(p, x0, 1e-12, 100);
  EXPECT_NEAR(r.x[0], 0.4, 1e-12);
  EXPECT_EQ(r.x[1], 0.7);
  EXPECT_TRUE(r.converged);
}

TEST(BoxQp, IllConditionedActiveSetMatchesApg) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal;
  DenseMatrix a(40, 6);
  for (Index i = 0; i < 40; ++i)
    for (Index j = 0; j < 6; ++j) a(i, j) = normal(gen) * std::pow(10.0, -0.8 * j);
  Vector b(40);
  for (Index i = 0; i < 40; ++i) b[i] = normal(gen);
  const auto p = BoxQpProblem::make(dense(a), b, 0.5);
  const auto cg = solve_active_set_cg(p, Vector::Zero(6), 1e-12, 100000);
  const auto apg = solve_apg(p, Vector::Zero(6), 1e-12, 2000000);
  EXPECT_NEAR(p.objective(cg.x), p.objective(apg.x), 1e-8 * p.objective(apg.x));
}

TEST(BoxQp, KktResidualDefinition) {
  Vector x(3);
  x << 1.0, -1.0, 0.2;
  Vector g(3);
  g << -0.3, 0.4, 0.1;
  EXPECT_DOUBLE_EQ(box_kkt_residual(x, g, 1.0), 0.1);
  g << 0.3, 0.0, 0.0;
  EXPECT_DOUBLE_EQ(box_kkt_residual(x, g, 1.0), 0.3);
  g << 0.0, -0.25, 0.0;
  EXPECT_DOUBLE_EQ(box_kkt_residual(x, g, 1.0), 0.25);
}

INSTANTIATE_TEST_SUITE_P(All, BoxQpSolvers, ::testing::ValuesIn(kAll),
                         [](const auto& info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace drlr
