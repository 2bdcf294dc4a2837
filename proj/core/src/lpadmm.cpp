#include "drlr/lpadmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "admm_driver.hpp"
#include "drlr/loss.hpp"

namespace drlr {

namespace {

constexpr double kPenaltyMargin = 1.01;
// Constant penalty, as a multiple of (sqrt(3)+1)L_f, for finishing an adaptive run.
constexpr double kResetPenaltyFactor = 10.0;
constexpr double kAdaptiveRhoCapFactor = 1e6;
constexpr double kAdaptiveKktTol = 1e-5;
constexpr double kInnerTolFloor = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

LpAdmmState initial_state(const SubproblemInstance& inst, double rho) {
  LpAdmmState s;
  s.beta = Vector::Zero(inst.num_features());
  s.mu = Vector::Zero(inst.num_samples());
  s.w = Vector::Zero(inst.num_samples());
  s.prev_mu = s.mu;
  s.rho = rho;
  s.k = 0;
  return s;
}

double constant_penalty_threshold(const SubproblemInstance& inst) {
  return (std::sqrt(3.0) + 1.0) * inst.lipschitz_f();
}

LpAdmmState lp_admm_step(const LpAdmmState& state, const SubproblemInstance& inst,
                         const LpAdmmParams& params, double spectral_bound, StepInfo* info) {
  if (state.beta.size() != inst.num_features() || state.mu.size() != inst.num_samples() ||
      state.w.size() != inst.num_samples()) {
    throw std::invalid_argument("lp_admm_step: state does not match instance dimensions");
  }
  const double rho = state.rho;

  // beta-update: box-constrained least squares, warm-started at the current beta.
  const auto qp = BoxQpProblem::make(inst.z_ptr(), state.mu + state.w / rho, inst.lambda(),
                                     spectral_bound);
  BoxQpResult inner =
      solve_box_qp(params.inner, qp, state.beta, params.inner_tol, params.inner_max_iter);

  LpAdmmState next;
  next.beta = std::move(inner.x);
  const Vector z_beta = inst.z().apply(next.beta);

  // mu-update against the first-order model of f at mu^k.
  next.mu = prox_P(z_beta - (state.w + grad_f(state.mu)) / rho, inst, rho);

  next.w = state.w - rho * (z_beta - next.mu);
  next.rho = std::min(params.gamma * rho, params.rho_cap);
  next.k = state.k + 1;
  next.prev_mu = state.mu;

  if (info) {
    info->inner_converged = inner.converged;
    info->inner_iterations = inner.iterations;
    info->x_gap_sq = (z_beta - state.mu).squaredNorm();
    info->mu_step_sq = (next.mu - state.mu).squaredNorm();
  }
  return next;
}

LpAdmmState lp_admm_step(const LpAdmmState& state, const SubproblemInstance& inst,
                         const LpAdmmParams& params, StepInfo* info) {
  return lp_admm_step(state, inst, params, estimate_spectral_bound(inst.z()), info);
}

namespace detail {

SubproblemResult run_linearized_admm(const SubproblemInstance& inst, const DrlrConfig& cfg,
                                     BoxQpSolverKind inner, const AdmmStepFn& step,
                                     const std::string& name,
                                     const std::optional<WarmStart>& init,
                                     const std::optional<ReferencePoint>& reference) {
  cfg.validate();
  const bool adaptive = cfg.adaptive();
  SubproblemResult out;
  Solution& sol = out.solution;
  Trace& trace = out.trace;
  trace.solver = adaptive ? name + "-adaptive" : name;
  trace.adaptive_penalty = adaptive;

  double rho = cfg.rho0;
  if (!adaptive) {
    const double threshold = constant_penalty_threshold(inst);
    if (rho <= threshold) {
      const double raised = kPenaltyMargin * threshold;
      sol.warnings.push_back("rho0=" + fmt(rho) + " is below (sqrt(3)+1)L_f=" + fmt(threshold) +
                             "; using rho=" + fmt(raised));
      rho = raised;
    }
  }
  trace.add_header("rho0", fmt(rho));
  trace.add_header("gamma", fmt(cfg.gamma));
  trace.add_header("lambda", fmt(inst.lambda()));
  trace.add_header("inner", std::string(to_string(inner)));

  LpAdmmParams params;
  params.inner = inner;
  params.gamma = cfg.gamma;
  params.rho_cap = adaptive ? kAdaptiveRhoCapFactor * cfg.rho0 : rho;
  params.inner_max_iter = cfg.inner_max_iter;

  LpAdmmState state = initial_state(inst, rho);
  if (init) {
    if (init->beta.size() != inst.num_features() || init->mu.size() != inst.num_samples() ||
        init->w.size() != inst.num_samples()) {
      throw std::invalid_argument("solve_subproblem: warm start has wrong dimensions");
    }
    state.beta = project_linf_ball(init->beta, inst.lambda());
    state.mu = init->mu;
    state.w = init->w;
    state.prev_mu = state.mu;
  }

  const double spectral_bound = estimate_spectral_bound(inst.z());
  const double center = inst.center();
  const Stopwatch clock;

  auto lyapunov = [&](const LpAdmmState& s) -> std::optional<double> {
    if (!reference) return std::nullopt;
    return (s.w - reference->w).squaredNorm() / (2.0 * s.rho) +
           0.5 * s.rho * (s.mu - reference->mu).squaredNorm() -
           bregman_f(reference->mu, s.mu, center);
  };

  auto record = [&](const LpAdmmState& s, double primal, const StepInfo* info,
                    std::optional<double> avg_obj) {
    TraceRecord r;
    r.iter = s.k;
    r.objective = subproblem_value(s.beta, inst);
    r.primal_residual = primal;
    r.kkt_residual = kkt_residual(s.beta, s.mu, s.w, inst);
    r.rho = s.rho;
    r.elapsed_ms = clock.elapsed_ms();
    r.lyapunov = lyapunov(s);
    r.averaged_objective = avg_obj;
    if (info) {
      r.x_gap_sq = info->x_gap_sq;
      r.mu_step_sq = info->mu_step_sq;
      r.inner_converged = info->inner_converged;
    }
    trace.records.push_back(r);
    return r;
  };

  double primal = (inst.z().apply(state.beta) - state.mu).norm();
  record(state, primal, nullptr, std::nullopt);

  Vector beta_sum = Vector::Zero(inst.num_features());
  Vector mu_sum = Vector::Zero(inst.num_samples());
  int inner_failures = 0;
  bool penalty_reset = false;
  sol.status = Status::MaxIter;

  for (int it = 0; it < cfg.max_iter; ++it) {
    params.inner_tol = std::min(cfg.inner_tol, std::max(0.1 * primal, kInnerTolFloor));
    StepInfo info;
    const double rho_used = state.rho;
    state = step(state, params, spectral_bound, &info);
    if (!info.inner_converged) ++inner_failures;

    primal = (inst.z().apply(state.beta) - state.mu).norm();
    beta_sum += state.beta;
    mu_sum += state.mu;
    const double kf = static_cast<double>(state.k);
    const Vector beta_avg = beta_sum / kf;
    const Vector mu_avg = mu_sum / kf;
    const double avg_obj = subproblem_objective(beta_avg, mu_avg, inst);

    // The trace stores the rho used by this step; state.rho is already the next one.
    LpAdmmState shown = state;
    shown.rho = rho_used;
    const TraceRecord& r = record(shown, primal, &info, avg_obj);

    if (!std::isfinite(r.objective) || !std::isfinite(primal) || !state.w.allFinite()) {
      sol.status = Status::Diverged;
      break;
    }
    if (primal <= cfg.primal_tol && (!adaptive || r.kkt_residual <= kAdaptiveKktTol)) {
      sol.status = Status::Converged;
      break;
    }
    // A large penalty closes the primal gap long before the multiplier settles,
    // after which each step moves w by O(1/rho). Once the primal test passes
    // with the KKT check still failing, finish at the safe constant penalty.
    if (adaptive && !penalty_reset && primal <= cfg.primal_tol) {
      penalty_reset = true;
      const double safe = std::max(cfg.rho0, kResetPenaltyFactor * constant_penalty_threshold(inst));
      sol.warnings.push_back("adaptive penalty reset from rho=" + fmt(state.rho) + " to " +
                             fmt(safe) + " at iteration " + std::to_string(state.k) +
                             " (kkt residual " + fmt(r.kkt_residual) + ")");
      trace.add_header("penalty_reset_iter", std::to_string(state.k));
      state.rho = safe;
      params.gamma = 1.0;
      params.rho_cap = safe;
    }
  }

  if (inner_failures > 0) {
    sol.warnings.push_back("inner box-QP solver hit its iteration cap in " +
                           std::to_string(inner_failures) + " steps");
  }
  sol.beta = state.beta;
  sol.lambda = inst.lambda();
  sol.objective = subproblem_value(state.beta, inst);
  sol.kkt_residual = kkt_residual(state.beta, state.mu, state.w, inst);
  sol.iterations = state.k;
  sol.mu = state.mu;
  sol.w = state.w;
  return out;
}

}  // namespace detail

SubproblemResult solve_subproblem(const SubproblemInstance& inst, const DrlrConfig& cfg,
                                  BoxQpSolverKind inner, const std::optional<WarmStart>& init,
                                  const std::optional<ReferencePoint>& reference) {
  const detail::AdmmStepFn step = [&inst](const LpAdmmState& s, const LpAdmmParams& p,
                                          double bound, StepInfo* info) {
    return lp_admm_step(s, inst, p, bound, info);
  };
  return detail::run_linearized_admm(inst, cfg, inner, step, "lpadmm", init, reference);
}

std::vector<int> rate_bound_violations(const Trace& trace, const RateBoundInputs& in) {
  if (trace.adaptive_penalty) {
    throw std::invalid_argument("check_rate_bound: the O(1/K) bound needs a constant penalty");
  }
  if (!(in.rho > (std::sqrt(3.0) + 1.0) * in.lipschitz_f)) {
    throw std::invalid_argument("check_rate_bound: rho must exceed (sqrt(3)+1) L_f");
  }
  const double c = (in.rho - 2.0 * in.lipschitz_f) / 4.0;
  const double numerator = in.w0.squaredNorm() / (2.0 * in.rho) +
                           0.5 * in.rho * (in.mu_star - in.mu0).squaredNorm() +
                           c * (in.mu0 - in.mu1).squaredNorm();
  std::vector<int> violations;
  for (const auto& r : trace.records) {
    if (r.iter < 1) continue;
    if (!r.averaged_objective) {
      throw std::invalid_argument("check_rate_bound: trace lacks averaged objectives");
    }
    const double gap = *r.averaged_objective - in.ref_objective;
    if (gap > numerator / static_cast<double>(r.iter) + 1e-9) violations.push_back(r.iter);
  }
  return violations;
}

bool check_rate_bound(const Trace& trace, const RateBoundInputs& in) {
  return rate_bound_violations(trace, in).empty();
}

}  // namespace drlr
