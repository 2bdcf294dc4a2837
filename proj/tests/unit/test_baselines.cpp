#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "drlr/baselines.hpp"
#include "drlr/loss.hpp"
#include "oracles.hpp"

namespace drlr {
namespace {

SubproblemInstance seeded(Index n_samples, Index n_features, std::uint64_t seed, double lambda,
                          double kappa = 1.0) {
  return SubproblemInstance(testing::synthetic(n_samples, n_features, seed), lambda, kappa);
}

SubproblemInstance scalar(double z, double lambda, double kappa) {
  return SubproblemInstance(std::make_shared<const DataMatrix>(DenseMatrix::Constant(1, 1, z)),
                            lambda, kappa);
}

DrlrConfig constant_config(double rho, double tol, int max_iter) {
  DrlrConfig cfg;
  cfg.gamma = 1.0;
  cfg.rho0 = rho;
  cfg.primal_tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

TEST(Names, Baselines) {
  EXPECT_EQ(to_string(BaselineKind::SubGradient), "subgradient");
  EXPECT_EQ(to_string(BaselineKind::Pdhg), "pdhg");
  EXPECT_EQ(to_string(BaselineKind::Ladmm), "ladmm");
  EXPECT_EQ(to_string(BaselineKind::Sadmm), "sadmm");
}

TEST(Subgradient, ZeroRadiusReturnsImmediately) {
  const auto inst = seeded(20, 3, 1, 0.0);
  const auto res = solve_subgradient(inst, Vector::Zero(3), 1000);
  EXPECT_EQ(res.solution.beta, Vector::Zero(3));
  EXPECT_EQ(res.solution.iterations, 0);
  EXPECT_EQ(res.solution.status, Status::Converged);
}

TEST(Subgradient, OneDimensionalLogisticLimit) {
  const auto inst = scalar(1.0, 10.0, 1e6);
  const auto res = solve_subgradient(inst, Vector::Zero(1), 2000, 100.0);
  const double u = testing::minimize_1d([](double t) { return logloss(t); }, -10.0, 10.0);
  EXPECT_NEAR(u, 10.0, 1e-9);
  EXPECT_NEAR(res.solution.objective, logloss(10.0), 1e-9);
  EXPECT_NEAR(logloss(10.0), 4.54e-5, 1e-7);
}

TEST(Subgradient, BestSoFarIsMonotone) {
  const auto inst = seeded(50, 3, 2, 0.1);
  const auto res = solve_subgradient(inst, Vector::Zero(3), 3000, 5.0);
  for (std::size_t i = 1; i < res.trace.records.size(); ++i)
    ASSERT_LE(res.trace.records[i].objective, res.trace.records[i - 1].objective);
  EXPECT_DOUBLE_EQ(res.solution.objective, res.trace.records.back().objective);
  EXPECT_THROW(solve_subgradient(inst, Vector::Zero(2), 10), std::invalid_argument);
  EXPECT_THROW(solve_subgradient(inst, Vector::Zero(3), 10, 0.0), std::invalid_argument);
}

TEST(Subgradient, CloseToReferenceAfterManyIterations) {
  const auto inst = seeded(100, 3, 7, 0.1);
  const auto ref = testing::reference_solve(inst);
  const auto res = solve_subgradient(inst, Vector::Zero(3), 100000, 10.0, {1000});
  EXPECT_NEAR(res.solution.objective, ref.objective, 1e-3);
  EXPECT_GE(res.solution.objective, ref.objective - 1e-9);
}

TEST(Pdhg, StepSizesSatisfyConditions) {
  const auto inst = seeded(60, 4, 3, 0.2);
  for (double pw : {0.1, 1.0, 10.0}) {
    const auto s = pdhg_step_sizes(inst, pw);
    const double k2 = s.operator_norm * s.operator_norm;
    EXPECT_LE(s.tau * s.sigma * k2, 1.0);
    EXPECT_GE(1.0 / s.tau - s.sigma * k2, s.smooth_lipschitz / 2 * (1 - 1e-12));
  }
  EXPECT_THROW(pdhg_step_sizes(inst, 0.0), std::invalid_argument);
}

TEST(Pdhg, ZeroDataGivesLogTwo) {
  const SubproblemInstance inst(std::make_shared<const DataMatrix>(DenseMatrix::Zero(5, 2)), 0.3, 1.0);
  const auto res = solve_pdhg(inst, 1000, 1e-9);
  EXPECT_EQ(res.solution.status, Status::Converged);
  EXPECT_NEAR(res.solution.objective, std::log(2.0), 1e-15);
}

TEST(Pdhg, MatchesReferenceAndDualSaturates) {
  const auto inst = seeded(100, 3, 7, 0.1);
  const auto ref = testing::reference_solve(inst);
  PdhgOptions opts;
  opts.tol = 1e-10;
  Vector y;
  const auto res = solve_pdhg(inst, opts, &y);
  EXPECT_EQ(res.solution.status, Status::Converged);
  EXPECT_NEAR(res.solution.objective, ref.objective, 1e-7 * ref.objective);
  const Vector m = inst.z().apply(res.solution.beta);
  int checked = 0;
  for (Index i = 0; i < m.size(); ++i) {
    EXPECT_LE(std::abs(y[i]), 1.0);
    const double r = m[i] - inst.center();
    if (std::abs(r) > 1e-3) {
      EXPECT_NEAR(y[i], r > 0 ? 1.0 : -1.0, 1e-6) << i;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Ladmm, ZeroEtaStepIsLpAdmmStep) {
  const auto inst = seeded(40, 3, 4, 0.1);
  LpAdmmParams p;
  p.inner_tol = 1e-13;
  const double bound = estimate_spectral_bound(inst.z());
  LpAdmmState a = initial_state(inst, 0.05);
  LpAdmmState b = a;
  for (int k = 0; k < 30; ++k) {
    a = lp_admm_step(a, inst, p, bound);
    b = ladmm_step(b, inst, 0.0, p, bound);
    ASSERT_LE(norm_inf(a.beta - b.beta), 1e-12);
    ASSERT_LE(norm_inf(a.mu - b.mu), 1e-12);
    ASSERT_LE(norm_inf(a.w - b.w), 1e-12);
  }
  // Small eta stays close to it.
  LpAdmmState c = initial_state(inst, 0.05);
  LpAdmmState d = c;
  for (int k = 0; k < 30; ++k) {
    c = lp_admm_step(c, inst, p, bound);
    d = ladmm_step(d, inst, 1e-12, p, bound);
  }
  EXPECT_LE(norm_inf(c.mu - d.mu), 1e-8);
}

TEST(Ladmm, RejectsSmallEta) {
  const auto inst = seeded(40, 3, 4, 0.1);
  const auto cfg = constant_config(0.05, 1e-6, 100);
  EXPECT_THROW(solve_ladmm(inst, cfg, inst.lipschitz_f()), std::invalid_argument);
  EXPECT_THROW(ladmm_step(initial_state(inst, 1.0), inst, -1.0, LpAdmmParams{},
                          estimate_spectral_bound(inst.z())),
               std::invalid_argument);
}

TEST(Ladmm, ConvergesToReference) {
  const auto inst = seeded(100, 3, 7, 0.1);
  const auto ref = testing::reference_solve(inst);
  const auto res = solve_ladmm(inst, constant_config(0.05, 1e-8, 50000), 2 * inst.lipschitz_f());
  EXPECT_EQ(res.solution.status, Status::Converged);
  EXPECT_NEAR(res.solution.objective, ref.objective, 1e-6 * ref.objective);
  bool has_eta = false;
  for (const auto& [k, v] : res.trace.header) has_eta |= k == "eta";
  EXPECT_TRUE(has_eta);
  EXPECT_EQ(res.trace.solver, "ladmm");
}

TEST(Sadmm, ConvergesToReference) {
  const auto inst = seeded(100, 3, 7, 0.1);
  const auto ref = testing::reference_solve(inst);
  DrlrConfig cfg = constant_config(1.0, 1e-8, 50000);
  const auto res = solve_sadmm(inst, cfg);
  EXPECT_EQ(res.solution.status, Status::Converged);
  EXPECT_NEAR(res.solution.objective, ref.objective, 1e-6 * ref.objective);
  EXPECT_LE(norm_inf(res.solution.beta), inst.lambda());
  EXPECT_EQ(res.trace.solver, "sadmm");
  bool has_rho = false;
  for (const auto& [k, v] : res.trace.header) has_rho |= k == "rho";
  EXPECT_TRUE(has_rho);
  EXPECT_THROW(solve_sadmm(inst, cfg, SadmmOptions{0.0, 1.0, {}}), std::invalid_argument);
}

TEST(Ssn, QuadraticClosedForms) {
  // N = 1, rho = 1, d2 = 0: band half-width 1/2.
  const auto inst = scalar(1.0, 1.0, 1.0);
  SsnOptions opts;
  opts.include_logistic = false;
  const Vector d2 = Vector::Zero(1);
  auto solve = [&](double d1) {
    return semi_smooth_newton(Vector::Constant(1, d1), d2, 1.0, inst, opts)[0];
  };
  EXPECT_NEAR(solve(3.0), 3.0 - 1.0, 1e-12);
  EXPECT_NEAR(solve(-2.0), -2.0, 1e-12);
  EXPECT_NEAR(solve(0.5), 0.25 - 0.25, 1e-12);
  const Vector y = ssn_bisection(Vector::Constant(1, 3.0), d2, 1.0, inst, false);
  EXPECT_NEAR(y[0], 2.0, 1e-10);
}

TEST(Ssn, GradientVanishesAndMatchesOneDimensionalOracle) {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 2.0);
  const auto inst = seeded(8, 2, 5, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    Vector d1(8);
    Vector d2(8);
    for (Index i = 0; i < 8; ++i) {
      d1[i] = normal(gen);
      d2[i] = normal(gen);
    }
    const double rho = std::pow(10.0, -2.0 + 0.08 * trial);
    SsnInfo info;
    const Vector y = semi_smooth_newton(d1, d2, rho, inst, {}, &info);
    EXPECT_LE(ssn_gradient(y, d1, d2, rho, inst).norm(), 1e-10);
    // phi is separable; minimize each coordinate directly.
    const double n = 8.0;
    const double t = 1.0 / (2.0 * n * rho);
    for (Index i = 0; i < 8; ++i) {
      auto phi_i = [&](double v) {
        const double s = v - d2[i];
        const double z = s > t ? s - t : (s < -t ? s + t : 0.0);
        return (logloss(v) + 0.5 * (v - inst.center())) / n + 0.5 * rho * (v - d1[i]) * (v - d1[i]) +
               std::abs(z) / (2.0 * n) + 0.5 * rho * (z - s) * (z - s);
      };
      const double lo = std::min(d1[i], d2[i]) - 50.0;
      const double hi = std::max(d1[i], d2[i]) + 50.0;
      EXPECT_NEAR(y[i], testing::minimize_1d(phi_i, lo, hi, 20001), 1e-6) << trial << " " << i;
    }
    const Vector yb = ssn_bisection(d1, d2, rho, inst);
    EXPECT_LE(norm_inf(yb - y), 1e-8);
  }
}

TEST(Ssn, InputValidation) {
  const auto inst = seeded(8, 2, 5, 0.2);
  EXPECT_THROW(semi_smooth_newton(Vector::Zero(8), Vector::Zero(8), 0.0, inst), std::invalid_argument);
  EXPECT_THROW(semi_smooth_newton(Vector::Zero(7), Vector::Zero(8), 1.0, inst), std::invalid_argument);
}

}  // namespace
}  // namespace drlr
