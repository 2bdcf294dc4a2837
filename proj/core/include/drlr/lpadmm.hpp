#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "drlr/boxqp.hpp"
#include "drlr/model.hpp"
#include "drlr/trace.hpp"

namespace drlr {

/// Iterate of the linearized proximal ADMM: x-block beta, y-block mu, multiplier w.
struct LpAdmmState {
  Vector beta;
  Vector mu;
  Vector w;
  double rho = 0.0;
  int k = 0;
  Vector prev_mu;
};

struct LpAdmmParams {
  BoxQpSolverKind inner = BoxQpSolverKind::ActiveSetCg;
  double gamma = 1.0;
  // Upper limit for rho in adaptive mode.
  double rho_cap = std::numeric_limits<double>::infinity();
  double inner_tol = 1e-8;
  int inner_max_iter = 5000;
};

struct StepInfo {
  bool inner_converged = true;
  int inner_iterations = 0;
  // ||Z beta^{k+1} - mu^k||^2 and ||mu^{k+1} - mu^k||^2.
  double x_gap_sq = 0.0;
  double mu_step_sq = 0.0;
};

struct SubproblemResult {
  Solution solution;
  Trace trace;
};

// Zero iterate at penalty rho.
LpAdmmState initial_state(const SubproblemInstance& inst, double rho);

/// One LP-ADMM iteration:
///   beta <- argmin ||Z beta - mu - w/rho||^2 over the ball (warm-started box QP),
///   mu   <- prox_{P/rho}(Z beta - (w + grad f(mu))/rho),
///   w    <- w - rho (Z beta - mu),
///   rho  <- min(gamma rho, rho_cap).
/// `spectral_bound` is an upper bound on lambda_max(Z^T Z).
LpAdmmState lp_admm_step(const LpAdmmState& state, const SubproblemInstance& inst,
                         const LpAdmmParams& params, double spectral_bound,
                         StepInfo* info = nullptr);
LpAdmmState lp_admm_step(const LpAdmmState& state, const SubproblemInstance& inst,
                         const LpAdmmParams& params, StepInfo* info = nullptr);

struct WarmStart {
  Vector beta;
  Vector mu;
  Vector w;
};

// Reference KKT point used to evaluate the Lyapunov sequence
//   m_k = ||w^k - w*||^2/(2 rho) + (rho/2)||mu^k - mu*||^2 - B_f(mu*, mu^k).
struct ReferencePoint {
  Vector mu;
  Vector w;
};

// (sqrt(3) + 1) L_f: constant penalties must exceed this.
double constant_penalty_threshold(const SubproblemInstance& inst);

/// Runs LP-ADMM until ||Z beta - mu||_2 <= cfg.primal_tol (and, with an adaptive
/// penalty, the KKT residual is <= 1e-5) or cfg.max_iter steps.
///
/// With gamma == 1 the penalty is raised to 1.01 (sqrt(3)+1) L_f when rho0 is
/// below it; the change is reported in Solution::warnings.
SubproblemResult solve_subproblem(const SubproblemInstance& inst, const DrlrConfig& cfg,
                                  BoxQpSolverKind inner,
                                  const std::optional<WarmStart>& init = std::nullopt,
                                  const std::optional<ReferencePoint>& reference = std::nullopt);

// Bound used by the O(1/K) check for the averaged iterates.
struct RateBoundInputs {
  double ref_objective = 0.0;
  double rho = 0.0;
  double lipschitz_f = 0.0;
  Vector w0;
  Vector mu0;
  Vector mu1;
  Vector mu_star;
};

// Iterations K >= 1 where F(avg beta, avg mu) - F* exceeds
// [||w0||^2/(2 rho) + (rho/2)||mu* - mu0||^2 + c ||mu0 - mu1||^2] / K + 1e-9,
// c = (rho - 2 L_f)/4. Throws std::invalid_argument on adaptive-penalty traces.
std::vector<int> rate_bound_violations(const Trace& trace, const RateBoundInputs& in);
bool check_rate_bound(const Trace& trace, const RateBoundInputs& in);

}  // namespace drlr
