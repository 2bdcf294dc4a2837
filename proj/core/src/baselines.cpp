#include "drlr/baselines.hpp"

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

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

bool should_record(int k, int max_iter, const TraceOptions& opts) {
  return opts.trace_every <= 1 || k % opts.trace_every == 0 || k == max_iter;
}

// Hinge multiplier theta_i in d max(m_i - c, 0), 1/2 at the kink.
double hinge_slope(double m, double center) {
  if (m > center) return 1.0;
  if (m < center) return 0.0;
  return 0.5;
}

// Loss gradient in margin space: (1/N)(h'(m_i) + theta_i).
Vector margin_gradient(const Vector& m, double center) {
  const double inv_n = 1.0 / static_cast<double>(m.size());
  Vector out(m.size());
  for (Index i = 0; i < m.size(); ++i) {
    out[i] = inv_n * (logloss_derivative(m[i]) + hinge_slope(m[i], center));
  }
  return out;
}

}  // namespace

std::string_view to_string(BaselineKind k) {
  switch (k) {
    case BaselineKind::SubGradient: return "subgradient";
    case BaselineKind::Pdhg: return "pdhg";
    case BaselineKind::Ladmm: return "ladmm";
    case BaselineKind::Sadmm: return "sadmm";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Projected subgradient

SubproblemResult solve_subgradient(const SubproblemInstance& inst, const Vector& x0, int max_iter,
                                   double step_c, TraceOptions trace_opts) {
  if (x0.size() != inst.num_features()) throw std::invalid_argument("solve_subgradient: x0 has wrong size");
  if (!(step_c > 0.0)) throw std::invalid_argument("solve_subgradient: step_c must be > 0");
  const double lambda = inst.lambda();
  const double center = inst.center();
  const DataMatrix& z = inst.z();

  SubproblemResult out;
  out.trace.solver = "subgradient";
  out.trace.add_header("step_c", fmt(step_c));
  out.trace.add_header("lambda", fmt(lambda));
  Solution& sol = out.solution;
  sol.lambda = lambda;

  Vector beta = project_linf_ball(x0, lambda);
  const Stopwatch clock;

  auto record = [&](int k, const Vector& b, const Vector& m, double best) {
    TraceRecord r;
    r.iter = k;
    r.objective = best;
    r.primal_residual = 0.0;
    r.kkt_residual = kkt_residual(b, m, -margin_gradient(m, center), inst);
    r.rho = 0.0;
    r.elapsed_ms = clock.elapsed_ms();
    out.trace.records.push_back(r);
  };

  Vector m = z.apply(beta);
  double best = margin_loss(m, center);
  Vector best_beta = beta;
  record(0, beta, m, best);

  if (lambda == 0.0) {
    sol.status = Status::Converged;
  } else {
    sol.status = Status::MaxIter;
    for (int k = 0; k < max_iter; ++k) {
      const Vector g = z.apply_transpose(margin_gradient(m, center));
      beta -= (step_c / std::sqrt(static_cast<double>(k + 1))) * g;
      clamp_inplace(beta, lambda);
      m = z.apply(beta);
      const double obj = margin_loss(m, center);
      if (obj < best) {
        best = obj;
        best_beta = beta;
      }
      if (should_record(k + 1, max_iter, trace_opts)) record(k + 1, beta, m, best);
    }
  }
  const Vector best_m = z.apply(best_beta);
  sol.beta = best_beta;
  sol.objective = best;
  sol.mu = best_m;
  sol.w = -margin_gradient(best_m, center);
  sol.kkt_residual = kkt_residual(best_beta, best_m, *sol.w, inst);
  sol.iterations = lambda == 0.0 ? 0 : max_iter;
  return out;
}

// ---------------------------------------------------------------------------
// PDHG

PdhgSteps pdhg_step_sizes(const SubproblemInstance& inst, double primal_weight) {
  if (!(primal_weight > 0.0)) throw std::invalid_argument("pdhg: primal_weight must be > 0");
  const double n = static_cast<double>(inst.num_samples());
  const double gram = estimate_spectral_bound(inst.z());
  PdhgSteps s{};
  s.operator_norm = std::sqrt(gram) / (2.0 * n);
  s.smooth_lipschitz = gram / (4.0 * n);
  s.sigma = primal_weight / std::max(s.operator_norm, 1e-300);
  s.tau = 1.0 / (s.smooth_lipschitz + s.sigma * s.operator_norm * s.operator_norm);
  if (s.tau * s.sigma * s.operator_norm * s.operator_norm > 1.0) {
    throw std::logic_error("pdhg: step sizes violate tau sigma ||K||^2 <= 1");
  }
  return s;
}

SubproblemResult solve_pdhg(const SubproblemInstance& inst, int max_iter, double tol) {
  PdhgOptions opts;
  opts.max_iter = max_iter;
  opts.tol = tol;
  return solve_pdhg(inst, opts);
}

SubproblemResult solve_pdhg(const SubproblemInstance& inst, const PdhgOptions& opts,
                            Vector* dual_out) {
  const DataMatrix& z = inst.z();
  const double lambda = inst.lambda();
  const double center = inst.center();
  const double inv_2n = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  const PdhgSteps steps = pdhg_step_sizes(inst, opts.primal_weight);

  SubproblemResult out;
  out.trace.solver = "pdhg";
  out.trace.add_header("tau", fmt(steps.tau));
  out.trace.add_header("sigma", fmt(steps.sigma));
  out.trace.add_header("lambda", fmt(lambda));
  Solution& sol = out.solution;
  sol.lambda = lambda;
  sol.status = Status::MaxIter;

  Vector x = Vector::Zero(inst.num_features());
  Vector y = Vector::Zero(inst.num_samples());
  Vector m = z.apply(x);
  double best = margin_loss(m, center);
  Vector best_x = x;
  const Stopwatch clock;

  auto dual_as_w = [&](const Vector& margins, const Vector& dual) -> Vector {
    return -(grad_f(margins) + inv_2n * dual);
  };
  auto record = [&](int k) {
    TraceRecord r;
    r.iter = k;
    r.objective = margin_loss(m, center);
    r.primal_residual = 0.0;
    r.kkt_residual = kkt_residual(x, m, dual_as_w(m, y), inst);
    r.rho = 0.0;
    r.elapsed_ms = clock.elapsed_ms();
    out.trace.records.push_back(r);
  };
  record(0);

  int k = 0;
  for (; k < opts.max_iter; ++k) {
    // Primal: explicit gradient of the smooth part plus K^T y, then the ball projection.
    const Vector grad = z.apply_transpose(grad_f(m) + inv_2n * y);
    Vector x_new = x - steps.tau * grad;
    clamp_inplace(x_new, lambda);
    const Vector m_new = z.apply(x_new);

    // Dual: ascent on (1/(2N)) y^T (A (2 x_new - x) - b), projection onto [-1, 1]^N.
    Vector y_new = y + steps.sigma * inv_2n * ((2.0 * m_new - m).array() - center).matrix();
    y_new = y_new.cwiseMax(-1.0).cwiseMin(1.0);

    const double dx = (x_new - x).norm();
    const double dy = (y_new - y).norm();
    x = std::move(x_new);
    y = std::move(y_new);
    m = m_new;

    const double obj = margin_loss(m, center);
    if (obj < best) {
      best = obj;
      best_x = x;
    }
    if (!std::isfinite(obj)) {
      sol.status = Status::Diverged;
      break;
    }
    const bool done = std::max(dx / steps.tau, dy / steps.sigma) <= opts.tol;
    if (done || should_record(k + 1, opts.max_iter, opts.trace)) record(k + 1);
    if (done) {
      sol.status = Status::Converged;
      ++k;
      break;
    }
  }

  // Converged runs report the last iterate; capped runs the best one seen.
  const Vector& beta = sol.status == Status::Converged ? x : best_x;
  const Vector beta_m = z.apply(beta);
  sol.beta = beta;
  sol.objective = margin_loss(beta_m, center);
  sol.mu = beta_m;
  sol.w = dual_as_w(beta_m, y);
  sol.kkt_residual = kkt_residual(beta, beta_m, *sol.w, inst);
  sol.iterations = k;
  if (dual_out) *dual_out = y;
  return out;
}

// ---------------------------------------------------------------------------
// Linearized ADMM

LpAdmmState ladmm_step(const LpAdmmState& state, const SubproblemInstance& inst, double eta,
                       const LpAdmmParams& params, double spectral_bound, StepInfo* info) {
  if (!(eta >= 0.0)) throw std::invalid_argument("ladmm_step: eta must be >= 0");
  if (state.beta.size() != inst.num_features() || state.mu.size() != inst.num_samples() ||
      state.w.size() != inst.num_samples()) {
    throw std::invalid_argument("ladmm_step: state does not match instance dimensions");
  }
  const double rho = state.rho;
  const auto qp = BoxQpProblem::make(inst.z_ptr(), state.mu + state.w / rho, inst.lambda(),
                                     spectral_bound);
  BoxQpResult inner =
      solve_box_qp(params.inner, qp, state.beta, params.inner_tol, params.inner_max_iter);

  LpAdmmState next;
  next.beta = std::move(inner.x);
  const Vector z_beta = inst.z().apply(next.beta);
  const Vector center =
      (rho * z_beta + eta * state.mu - state.w - grad_f(state.mu)) / (rho + eta);
  next.mu = prox_P(center, inst, rho + eta);
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

SubproblemResult solve_ladmm(const SubproblemInstance& inst, const DrlrConfig& cfg, double eta,
                             BoxQpSolverKind inner) {
  if (!(eta > inst.lipschitz_f())) {
    throw std::invalid_argument("solve_ladmm: eta=" + fmt(eta) + " must exceed L_f=" +
                                fmt(inst.lipschitz_f()));
  }
  const detail::AdmmStepFn step = [&inst, eta](const LpAdmmState& s, const LpAdmmParams& p,
                                               double bound, StepInfo* info) {
    return ladmm_step(s, inst, eta, p, bound, info);
  };
  SubproblemResult res =
      detail::run_linearized_admm(inst, cfg, inner, step, "ladmm", std::nullopt, std::nullopt);
  res.trace.add_header("eta", fmt(eta));
  return res;
}

// ---------------------------------------------------------------------------
// Semi-smooth Newton for the (y, z) block of standard ADMM

namespace {

struct EnvelopeTerms {
  double value;
  double slope;
  bool in_band;
};

// env(s) = min_z w|z| + (rho/2)(z - s)^2 with w = 1/(2N).
EnvelopeTerms envelope(double s, double weight, double rho) {
  const double c = weight / rho;
  if (std::abs(s) <= c) return {0.5 * rho * s * s, rho * s, true};
  return {weight * (std::abs(s) - 0.5 * c), std::copysign(weight, s), false};
}

double ssn_objective(const Vector& y, const Vector& d1, const Vector& d2, double rho, double center,
                     double weight, bool include_logistic) {
  const double inv_n = 2.0 * weight;
  double acc = 0.0;
  for (Index i = 0; i < y.size(); ++i) {
    const double smooth = (include_logistic ? logloss(y[i]) : 0.0) + 0.5 * (y[i] - center);
    acc += inv_n * smooth + 0.5 * rho * (y[i] - d1[i]) * (y[i] - d1[i]) +
           envelope(y[i] - d2[i], weight, rho).value;
  }
  return acc;
}

double ssn_coordinate_slope(double yi, double d1i, double d2i, double rho, double weight,
                            bool include_logistic) {
  const double inv_n = 2.0 * weight;
  const double smooth = (include_logistic ? logloss_derivative(yi) : 0.0) + 0.5;
  return inv_n * smooth + rho * (yi - d1i) + envelope(yi - d2i, weight, rho).slope;
}

}  // namespace

Vector ssn_gradient(const Vector& y, const Vector& d1, const Vector& d2, double rho,
                    const SubproblemInstance& inst, bool include_logistic) {
  const double weight = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  Vector g(y.size());
  for (Index i = 0; i < y.size(); ++i) {
    g[i] = ssn_coordinate_slope(y[i], d1[i], d2[i], rho, weight, include_logistic);
  }
  return g;
}

Vector semi_smooth_newton(const Vector& d1, const Vector& d2, double rho,
                          const SubproblemInstance& inst, const SsnOptions& opts, SsnInfo* info) {
  if (!(rho > 0.0)) throw std::invalid_argument("semi_smooth_newton: rho must be > 0");
  if (d1.size() != inst.num_samples() || d2.size() != inst.num_samples()) {
    throw std::invalid_argument("semi_smooth_newton: dimension mismatch");
  }
  const double weight = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  const double inv_n = 2.0 * weight;
  const double center = inst.center();
  const double band = weight / rho;

  Vector y = d1;
  SsnInfo local;
  SsnInfo& stats = info ? *info : local;
  stats = SsnInfo{};

  for (int it = 0; it < opts.max_iter; ++it) {
    const Vector g = ssn_gradient(y, d1, d2, rho, inst, opts.include_logistic);
    const double gnorm = g.norm();
    stats.grad_norms.push_back(gnorm);
    stats.iterations = it;
    if (gnorm <= opts.tol) return y;

    Vector dir(y.size());
    for (Index i = 0; i < y.size(); ++i) {
      const double curv = opts.include_logistic ? inv_n * logloss_curvature(y[i]) : 0.0;
      const double in_band = std::abs(y[i] - d2[i]) <= band ? 1.0 : 0.0;
      dir[i] = -g[i] / (curv + rho + rho * in_band);
    }

    const double phi0 = ssn_objective(y, d1, d2, rho, center, weight, opts.include_logistic);
    const double slope = g.dot(dir);
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vector trial = y + t * dir;
      const double phi_t = ssn_objective(trial, d1, d2, rho, center, weight, opts.include_logistic);
      // Near the solution phi differences fall below rounding; a halved
      // gradient norm is then accepted as progress.
      if (phi_t <= phi0 + 1e-4 * t * slope ||
          ssn_gradient(trial, d1, d2, rho, inst, opts.include_logistic).norm() <= 0.5 * gnorm) {
        y = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      throw std::runtime_error("semi_smooth_newton: line search failed");
    }
  }
  const double gnorm = ssn_gradient(y, d1, d2, rho, inst, opts.include_logistic).norm();
  stats.grad_norms.push_back(gnorm);
  stats.iterations = opts.max_iter;
  if (gnorm <= opts.tol) return y;
  throw std::runtime_error("semi_smooth_newton: no convergence in " +
                           std::to_string(opts.max_iter) + " iterations");
}

Vector ssn_bisection(const Vector& d1, const Vector& d2, double rho, const SubproblemInstance& inst,
                     bool include_logistic) {
  const double weight = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  Vector y(d1.size());
  for (Index i = 0; i < d1.size(); ++i) {
    auto slope = [&](double t) {
      return ssn_coordinate_slope(t, d1[i], d2[i], rho, weight, include_logistic);
    };
    // The non-quadratic terms have slope bounded by 2/N, so the root is within
    // (2/N)/rho of d1.
    const double reach = 4.0 * weight / rho + 1.0;
    double lo = d1[i] - reach;
    double hi = d1[i] + reach;
    while (slope(lo) > 0.0) lo -= reach;
    while (slope(hi) < 0.0) hi += reach;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      (slope(mid) > 0.0 ? hi : lo) = mid;
    }
    y[i] = 0.5 * (lo + hi);
  }
  return y;
}

// ---------------------------------------------------------------------------
// Two-block standard ADMM

SubproblemResult solve_sadmm(const SubproblemInstance& inst, const DrlrConfig& cfg,
                             const SadmmOptions& opts) {
  cfg.validate();
  if (!(opts.rho > 0.0)) throw std::invalid_argument("solve_sadmm: rho must be > 0");
  if (!(opts.sigma > 0.0)) throw std::invalid_argument("solve_sadmm: sigma must be > 0");
  const DataMatrix& z_mat = inst.z();
  const double rho = opts.rho;
  const double sigma = opts.sigma;
  const double center = inst.center();
  const double weight = 1.0 / (2.0 * static_cast<double>(inst.num_samples()));
  const Index n_samples = inst.num_samples();

  SubproblemResult out;
  out.trace.solver = "sadmm";
  out.trace.add_header("rho", fmt(rho));
  out.trace.add_header("sigma", fmt(sigma));
  out.trace.add_header("lambda", fmt(inst.lambda()));
  Solution& sol = out.solution;
  sol.lambda = inst.lambda();
  sol.status = Status::MaxIter;

  Vector x = Vector::Zero(inst.num_features());
  Vector y = Vector::Zero(n_samples);
  Vector z = Vector::Zero(n_samples);
  Vector u = Vector::Zero(n_samples);
  Vector v = Vector::Zero(n_samples);
  const Vector b = Vector::Constant(n_samples, center);
  const double spectral_bound = estimate_spectral_bound(z_mat);
  const ProxShiftedAbs soft(0.0, weight, rho);
  const Stopwatch clock;
  int bisection_fallbacks = 0;

  auto record = [&](int k, double r1, double r2) {
    TraceRecord r;
    r.iter = k;
    r.objective = subproblem_value(x, inst);
    r.primal_residual = std::max(r1, r2);
    // z + b carries the kink exactly (z comes out of a soft-threshold), y only up to r2.
    r.kkt_residual = kkt_residual(x, z + b, -u, inst);
    r.rho = rho;
    r.elapsed_ms = clock.elapsed_ms();
    out.trace.records.push_back(r);
  };
  record(0, (z_mat.apply(x) - y).norm(), (z - y + b).norm());

  int k = 0;
  for (; k < cfg.max_iter; ++k) {
    const double inner_tol = cfg.inner_tol;
    const auto qp = BoxQpProblem::make(inst.z_ptr(), y - u / rho, inst.lambda(), spectral_bound);
    x = solve_active_set_cg(qp, x, inner_tol, cfg.inner_max_iter).x;
    const Vector ax = z_mat.apply(x);

    const Vector d1 = ax + u / rho;
    const Vector d2 = b + v / rho;
    try {
      y = semi_smooth_newton(d1, d2, rho, inst);
    } catch (const std::runtime_error&) {
      y = ssn_bisection(d1, d2, rho, inst);
      ++bisection_fallbacks;
    }
    z = soft.apply(y - d2);

    u += sigma * rho * (ax - y);
    v += sigma * rho * (z - y + b);

    const double r1 = (ax - y).norm();
    const double r2 = (z - y + b).norm();
    if (should_record(k + 1, cfg.max_iter, opts.trace) ||
        (r1 <= cfg.primal_tol && r2 <= cfg.primal_tol)) {
      record(k + 1, r1, r2);
    }
    if (!x.allFinite() || !y.allFinite()) {
      sol.status = Status::Diverged;
      ++k;
      break;
    }
    if (r1 <= cfg.primal_tol && r2 <= cfg.primal_tol &&
        kkt_residual(x, z + b, -u, inst) <= cfg.primal_tol) {
      sol.status = Status::Converged;
      ++k;
      break;
    }
  }
  if (bisection_fallbacks > 0) {
    sol.warnings.push_back("semi-smooth Newton fell back to bisection in " +
                           std::to_string(bisection_fallbacks) + " iterations");
    out.trace.add_header("bisection_fallbacks", std::to_string(bisection_fallbacks));
  }
  sol.beta = x;
  sol.objective = subproblem_value(x, inst);
  sol.mu = z + b;
  sol.w = -u;
  sol.kkt_residual = kkt_residual(x, z + b, -u, inst);
  sol.iterations = k;
  return out;
}

}  // namespace drlr
