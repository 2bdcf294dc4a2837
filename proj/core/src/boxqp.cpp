#include "drlr/boxqp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "drlr/loss.hpp"

namespace drlr {

namespace {

constexpr double kSpectralFloor = 1e-30;
constexpr double kSpectralInflation = 1.01;
constexpr int kPowerIterations = 200;
constexpr double kPowerRelTol = 1e-10;
// Incremental residual/gradient updates in the CG solver drift; refresh periodically.
constexpr int kCgRefreshEvery = 50;

void check_problem(const BoxQpProblem& p, const Vector& x0) {
  if (!p.a) throw std::invalid_argument("BoxQpProblem: null matrix");
  if (p.b.size() != p.a->rows()) throw std::invalid_argument("BoxQpProblem: b has wrong size");
  if (x0.size() != p.a->cols()) throw std::invalid_argument("BoxQpProblem: x0 has wrong size");
  if (p.radius < 0.0) throw std::invalid_argument("BoxQpProblem: negative radius");
}

}  // namespace

BoxQpProblem BoxQpProblem::make(std::shared_ptr<const DataMatrix> a, Vector b, double radius) {
  if (!a) throw std::invalid_argument("BoxQpProblem: null matrix");
  const double bound = estimate_spectral_bound(*a);
  return make(std::move(a), std::move(b), radius, bound);
}

BoxQpProblem BoxQpProblem::make(std::shared_ptr<const DataMatrix> a, Vector b, double radius,
                                double spectral_bound) {
  BoxQpProblem p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.radius = radius;
  p.spectral_bound = spectral_bound;
  check_problem(p, Vector::Zero(p.a->cols()));
  return p;
}

double BoxQpProblem::objective(const Vector& x) const { return (a->apply(x) - b).squaredNorm(); }

Vector BoxQpProblem::gradient(const Vector& x) const { return a->apply_transpose(a->apply(x) - b); }

std::string_view to_string(BoxQpSolverKind k) {
  switch (k) {
    case BoxQpSolverKind::Apg: return "apg";
    case BoxQpSolverKind::Coordinate: return "coord";
    case BoxQpSolverKind::ActiveSetCg: return "ascg";
  }
  return "unknown";
}

BoxQpSolverKind parse_box_qp_solver(std::string_view name) {
  if (name == "apg") return BoxQpSolverKind::Apg;
  if (name == "coord") return BoxQpSolverKind::Coordinate;
  if (name == "ascg") return BoxQpSolverKind::ActiveSetCg;
  throw std::invalid_argument("unknown box-QP solver '" + std::string(name) +
                              "' (expected apg, coord or ascg)");
}

double estimate_spectral_bound(const DataMatrix& a) {
  const Index n = a.cols();
  if (n == 0 || a.rows() == 0) return kSpectralFloor;

  std::mt19937_64 gen(0x5eedULL);
  Vector v(n);
  for (Index j = 0; j < n; ++j) {
    v[j] = 0.5 + static_cast<double>(gen() >> 11) * 0x1.0p-53;
  }
  v.normalize();

  double estimate = 0.0;
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector next = a.apply_transpose(a.apply(v));
    const double norm = next.norm();
    if (norm == 0.0) break;
    const double prev = estimate;
    estimate = norm;  // ||A^T A v|| with ||v|| = 1
    v = next / norm;
    if (it > 0 && std::abs(estimate - prev) <= kPowerRelTol * estimate) break;
  }
  if (!(estimate > 0.0)) {
    // The start vector may lie in the null space of a rank-deficient A; the
    // squared Frobenius norm is always a valid (looser) bound.
    estimate = a.column_sq_norms().sum();
  }
  return std::max(estimate * kSpectralInflation, kSpectralFloor);
}

double box_kkt_residual(const Vector& x, const Vector& g, double radius) {
  double worst = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    double v;
    if (radius > 0.0 && x[i] >= radius) {
      v = std::max(g[i], 0.0);
    } else if (radius > 0.0 && x[i] <= -radius) {
      v = std::max(-g[i], 0.0);
    } else if (radius == 0.0) {
      v = 0.0;  // the box is a single point
    } else {
      v = std::abs(g[i]);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Accelerated projected gradient with momentum k/(k+3) and adaptive restart.

BoxQpResult solve_apg(const BoxQpProblem& p, const Vector& x0, double tol, int max_iter) {
  check_problem(p, x0);
  const DataMatrix& a = *p.a;
  const double step = 1.0 / p.spectral_bound;

  Vector x = project_linf_ball(x0, p.radius);
  Vector residual = a.apply(x) - p.b;
  Vector g = a.apply_transpose(residual);
  Vector x_prev = x;
  Vector g_prev = g;

  BoxQpResult best{x, false, 0, box_kkt_residual(x, g, p.radius)};
  double best_obj = residual.squaredNorm();

  int k = 0;
  for (int it = 0; it < max_iter; ++it) {
    const double kkt = box_kkt_residual(x, g, p.radius);
    if (kkt <= tol) {
      return BoxQpResult{x, true, it, kkt};
    }
    const double momentum = static_cast<double>(k) / static_cast<double>(k + 3);
    // g is affine in x, so the gradient at the extrapolated point is the same
    // combination of the two stored gradients.
    const Vector y = x + momentum * (x - x_prev);
    const Vector gy = g + momentum * (g - g_prev);
    Vector x_new = y - step * gy;
    clamp_inplace(x_new, p.radius);

    residual = a.apply(x_new) - p.b;
    Vector g_new = a.apply_transpose(residual);
    const double obj = residual.squaredNorm();

    // Restart when the gradient-mapping step and the last move disagree.
    if ((y - x_new).dot(x_new - x) > 0.0) {
      k = 0;
    } else {
      ++k;
    }
    x_prev = std::move(x);
    g_prev = std::move(g);
    x = std::move(x_new);
    g = std::move(g_new);

    if (obj < best_obj) {
      best_obj = obj;
      best.x = x;
      best.kkt_residual = box_kkt_residual(x, g, p.radius);
    }
    best.iterations = it + 1;
  }
  const double kkt = box_kkt_residual(x, g, p.radius);
  if (kkt <= tol) return BoxQpResult{x, true, max_iter, kkt};
  best.converged = best.kkt_residual <= tol;
  return best;
}

// ---------------------------------------------------------------------------
// Cyclic exact coordinate minimization.

BoxQpResult solve_coordinate(const BoxQpProblem& p, const Vector& x0, double tol, int max_iter) {
  check_problem(p, x0);
  const DataMatrix& a = *p.a;
  const Vector& d = a.column_sq_norms();
  const Index n = a.cols();

  Vector x = project_linf_ball(x0, p.radius);
  Vector residual = a.apply(x) - p.b;

  for (int sweep = 0; sweep < max_iter; ++sweep) {
    double max_move = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (d[j] == 0.0) continue;
      const double gj = a.column_dot(j, residual);
      const double xj = std::clamp(x[j] - gj / d[j], -p.radius, p.radius);
      const double delta = xj - x[j];
      if (delta != 0.0) {
        a.column_axpy(j, delta, residual);
        x[j] = xj;
        max_move = std::max(max_move, std::abs(delta));
      }
    }
    if (max_move <= tol) {
      // Small moves alone do not bound |g_j| = d_j * move; confirm with the full gradient.
      const Vector g = a.apply_transpose(residual);
      const double kkt = box_kkt_residual(x, g, p.radius);
      if (kkt <= tol || max_move == 0.0) {
        return BoxQpResult{x, kkt <= tol, sweep + 1, kkt};
      }
    }
  }
  const Vector g = a.apply_transpose(a.apply(x) - p.b);
  const double kkt = box_kkt_residual(x, g, p.radius);
  return BoxQpResult{x, kkt <= tol, max_iter, kkt};
}

// ---------------------------------------------------------------------------
// Conjugate gradient on the free set with bound-set restarts.

BoxQpResult solve_active_set_cg(const BoxQpProblem& p, const Vector& x0, double tol,
                                int max_iter) {
  check_problem(p, x0);
  const DataMatrix& a = *p.a;
  const Index n = a.cols();
  const double radius = p.radius;

  if (radius == 0.0) return BoxQpResult{Vector::Zero(n), true, 0, 0.0};

  Vector x = project_linf_ball(x0, radius);
  Vector residual = a.apply(x) - p.b;
  Vector g = a.apply_transpose(residual);
  double obj = residual.squaredNorm();

  std::vector<char> free_set(static_cast<std::size_t>(n), 0);
  std::vector<char> prev_free(static_cast<std::size_t>(n), 0);
  Vector r(n);
  Vector dir = Vector::Zero(n);
  double r_sq_prev = 0.0;
  bool restart = true;
  int since_refresh = 0;

  for (int it = 0; it < max_iter; ++it) {
    const double kkt = box_kkt_residual(x, g, radius);
    if (kkt <= tol) return BoxQpResult{x, true, it, kkt};

    // Bound set: at the box face with the negative gradient pointing outward.
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const bool bound = std::abs(x[i]) == radius && -g[i] * x[i] >= 0.0;
      free_set[iu] = bound ? 0 : 1;
      if (free_set[iu] != prev_free[iu]) changed = true;
      r[i] = bound ? 0.0 : -g[i];
    }
    const double r_sq = r.squaredNorm();
    if (r_sq == 0.0) {
      // Free gradient vanishes; the bound set satisfies its sign condition by construction.
      return BoxQpResult{x, true, it, box_kkt_residual(x, g, radius)};
    }

    if (restart || changed) {
      dir = r;
    } else {
      dir = r + (r_sq / r_sq_prev) * dir;
    }
    const Vector a_dir = a.apply(dir);
    const double curvature = a_dir.squaredNorm();

    bool accepted = false;
    if (curvature > 0.0) {
      const double alpha = r_sq / curvature;
      const Vector trial = x + alpha * dir;
      Vector projected = project_linf_ball(trial, radius);
      if (projected == trial) {
        x = projected;
        residual.noalias() += alpha * a_dir;
        g.noalias() += alpha * a.apply_transpose(a_dir);
        obj = residual.squaredNorm();
        restart = false;
        accepted = true;
        if (++since_refresh >= kCgRefreshEvery) {
          residual = a.apply(x) - p.b;
          g = a.apply_transpose(residual);
          obj = residual.squaredNorm();
          since_refresh = 0;
        }
      } else {
        // Leaves the box: compare the projected point with the step truncated
        // at the first face hit. The truncated step always decreases.
        double alpha_max = alpha;
        Index hit = -1;
        for (Index i = 0; i < n; ++i) {
          if (dir[i] == 0.0) continue;
          const double edge = dir[i] > 0.0 ? radius : -radius;
          const double step = (edge - x[i]) / dir[i];
          if (step < alpha_max) {
            alpha_max = std::max(step, 0.0);
            hit = i;
          }
        }
        Vector truncated = x + alpha_max * dir;
        clamp_inplace(truncated, radius);
        if (hit >= 0) truncated[hit] = dir[hit] > 0.0 ? radius : -radius;
        Vector res_proj = a.apply(projected) - p.b;
        Vector res_trunc = a.apply(truncated) - p.b;
        const double obj_proj = res_proj.squaredNorm();
        const double obj_trunc = res_trunc.squaredNorm();
        const bool use_proj = obj_proj <= obj_trunc;
        const double obj_new = use_proj ? obj_proj : obj_trunc;
        if (obj_new < obj) {
          x = use_proj ? std::move(projected) : std::move(truncated);
          residual = use_proj ? std::move(res_proj) : std::move(res_trunc);
          g = a.apply_transpose(residual);
          obj = obj_new;
          restart = true;
          accepted = true;
          since_refresh = 0;
        }
      }
    }
    if (!accepted) {
      // Projected search failed to decrease the objective: take a projected
      // gradient step, which always does.
      Vector xn = x - g / p.spectral_bound;
      clamp_inplace(xn, radius);
      residual = a.apply(xn) - p.b;
      const double obj_new = residual.squaredNorm();
      if (!(obj_new < obj) && xn == x) {
        return BoxQpResult{x, box_kkt_residual(x, g, radius) <= tol, it,
                           box_kkt_residual(x, g, radius)};
      }
      x = std::move(xn);
      g = a.apply_transpose(residual);
      obj = obj_new;
      restart = true;
      since_refresh = 0;
    }
    prev_free = free_set;
    r_sq_prev = r_sq;
  }
  const double kkt = box_kkt_residual(x, g, radius);
  return BoxQpResult{x, kkt <= tol, max_iter, kkt};
}

BoxQpResult solve_box_qp(BoxQpSolverKind kind, const BoxQpProblem& p, const Vector& x0,
                         double tol, int max_iter) {
  switch (kind) {
    case BoxQpSolverKind::Apg: return solve_apg(p, x0, tol, max_iter);
    case BoxQpSolverKind::Coordinate: return solve_coordinate(p, x0, tol, max_iter);
    case BoxQpSolverKind::ActiveSetCg: return solve_active_set_cg(p, x0, tol, max_iter);
  }
  throw std::invalid_argument("solve_box_qp: unknown solver kind");
}

}  // namespace drlr
