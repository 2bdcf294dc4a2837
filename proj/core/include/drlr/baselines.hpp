#pragma once

#include <optional>
#include <string_view>

#include "drlr/boxqp.hpp"
#include "drlr/lpadmm.hpp"
#include "drlr/model.hpp"

namespace drlr {

// Comparison solvers for the fixed-lambda beta-subproblem.
enum class BaselineKind { SubGradient, Pdhg, Ladmm, Sadmm };

std::string_view to_string(BaselineKind k);

// Records every `trace_every`-th iteration (plus the first and last).
struct TraceOptions {
  int trace_every = 1;
};

// ---------------------------------------------------------------------------
// Projected subgradient with step step_c / sqrt(k + 1); the hinge subgradient
// at its kink is 1/2. Solution holds the best iterate seen.
SubproblemResult solve_subgradient(const SubproblemInstance& inst, const Vector& x0, int max_iter,
                                   double step_c = 1.0, TraceOptions trace = {});

// ---------------------------------------------------------------------------
// Primal-dual hybrid gradient on
//   min_{||x||_inf <= lambda} max_{||y||_inf <= 1}
//       (1/N) sum [h(a_i^T x) + (a_i^T x - b_i)/2] + (1/(2N)) y^T (A x - b),
// with A = Z and b = lambda kappa 1. The logistic term is handled by an explicit
// gradient step; tau and sigma satisfy tau sigma ||K||^2 <= 1 and
// 1/tau - sigma ||K||^2 >= L/2 for K = A/(2N).
struct PdhgOptions {
  int max_iter = 200000;
  double tol = 1e-9;
  // sigma = primal_weight / ||K||; 1 balances the two step sizes.
  double primal_weight = 1.0;
  TraceOptions trace;
};

struct PdhgSteps {
  double tau;
  double sigma;
  double operator_norm;  // ||K||
  double smooth_lipschitz;
};

PdhgSteps pdhg_step_sizes(const SubproblemInstance& inst, double primal_weight);

// Optional dual output y in [-1, 1]^N from the final iterate.
SubproblemResult solve_pdhg(const SubproblemInstance& inst, const PdhgOptions& opts,
                            Vector* dual_out = nullptr);
SubproblemResult solve_pdhg(const SubproblemInstance& inst, int max_iter, double tol);

// ---------------------------------------------------------------------------
// Linearized ADMM: as LP-ADMM, but the mu-update keeps (eta/2)||mu - mu^k||^2,
// i.e. mu = prox_{P/(rho+eta)}((rho Z beta + eta mu^k - w - grad f(mu^k))/(rho+eta)).
// The step itself accepts any eta >= 0 (eta = 0 is exactly an LP-ADMM step).
LpAdmmState ladmm_step(const LpAdmmState& state, const SubproblemInstance& inst, double eta,
                       const LpAdmmParams& params, double spectral_bound,
                       StepInfo* info = nullptr);

// Requires eta > L_f (std::invalid_argument otherwise).
SubproblemResult solve_ladmm(const SubproblemInstance& inst, const DrlrConfig& cfg, double eta,
                             BoxQpSolverKind inner = BoxQpSolverKind::ActiveSetCg);

// ---------------------------------------------------------------------------
// Two-block standard ADMM on
//   min f(y) + g(z) + I{||x||_inf <= lambda}  s.t.  A x = y,  z = y - b,
// with g(z) = (1/(2N)) ||z||_1. The x-update is a box QP (active-set CG), the
// (y, z) block is solved jointly by semi-smooth Newton on y with z eliminated
// through the Moreau envelope of g.
struct SadmmOptions {
  double sigma = 1.0;
  double rho = 10.0;
  TraceOptions trace;
};

SubproblemResult solve_sadmm(const SubproblemInstance& inst, const DrlrConfig& cfg,
                             const SadmmOptions& opts = {});

struct SsnOptions {
  int max_iter = 100;
  double tol = 1e-10;
  // Test hook: drop the logistic part of f (pure quadratic + envelope).
  bool include_logistic = true;
};

struct SsnInfo {
  int iterations = 0;
  bool used_bisection = false;
  std::vector<double> grad_norms;  // gradient norm at each Newton iterate
};

/// Minimizes over y
///   phi(y) = f(y) + (rho/2)||y - d1||^2 + env(y - d2),
/// env(s) = min_z (1/(2N))||z||_1 + (rho/2)||z - s||^2, using the diagonal
/// generalized Hessian f'' + rho + rho * 1{|y_i - d2_i| <= 1/(2N rho)} and an
/// Armijo backtracking line search (factor 0.5, slope 1e-4).
///
/// Throws std::runtime_error after max_iter iterations without reaching tol.
Vector semi_smooth_newton(const Vector& d1, const Vector& d2, double rho,
                          const SubproblemInstance& inst, const SsnOptions& opts = {},
                          SsnInfo* info = nullptr);

// Gradient of phi above (for certificates in tests).
Vector ssn_gradient(const Vector& y, const Vector& d1, const Vector& d2, double rho,
                    const SubproblemInstance& inst, bool include_logistic = true);

// Coordinate-wise bisection fallback on the monotone gradient of phi.
Vector ssn_bisection(const Vector& d1, const Vector& d2, double rho, const SubproblemInstance& inst,
                     bool include_logistic = true);

}  // namespace drlr
