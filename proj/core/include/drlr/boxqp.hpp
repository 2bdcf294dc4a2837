#pragma once

#include <memory>
#include <string_view>

#include "drlr/linalg.hpp"

namespace drlr {

/// Box-constrained least squares
///   min ||A x - b||_2^2  s.t.  ||x||_inf <= radius.
/// Every solver works with the half-gradient g = A^T (A x - b) and keeps its
/// iterates inside the box by exact clamping.
struct BoxQpProblem {
  std::shared_ptr<const DataMatrix> a;
  Vector b;
  double radius = 0.0;
  // Upper bound on lambda_max(A^T A); 1/spectral_bound is the projected-gradient step.
  double spectral_bound = 0.0;

  // Estimates the spectral bound from `a`.
  static BoxQpProblem make(std::shared_ptr<const DataMatrix> a, Vector b, double radius);
  // Reuses a precomputed bound.
  static BoxQpProblem make(std::shared_ptr<const DataMatrix> a, Vector b, double radius,
                           double spectral_bound);

  double objective(const Vector& x) const;
  Vector gradient(const Vector& x) const;
};

enum class BoxQpSolverKind { Apg, Coordinate, ActiveSetCg };

std::string_view to_string(BoxQpSolverKind k);
// Accepts "apg", "coord", "ascg". Throws std::invalid_argument otherwise.
BoxQpSolverKind parse_box_qp_solver(std::string_view name);

struct BoxQpResult {
  Vector x;
  bool converged = false;
  int iterations = 0;
  double kkt_residual = 0.0;
};

// Power iteration on A^T A (fixed start, <= 200 iterations or relative change
// < 1e-10), inflated by 1.01. An all-zero matrix gives 1e-30.
double estimate_spectral_bound(const DataMatrix& a);

// Largest coordinate violation of the box optimality conditions for half-gradient g:
// |g_i| when |x_i| < radius, max(g_i, 0) at x_i = radius, max(-g_i, 0) at x_i = -radius.
double box_kkt_residual(const Vector& x, const Vector& g, double radius);

BoxQpResult solve_apg(const BoxQpProblem& p, const Vector& x0, double tol, int max_iter);
BoxQpResult solve_coordinate(const BoxQpProblem& p, const Vector& x0, double tol, int max_iter);
BoxQpResult solve_active_set_cg(const BoxQpProblem& p, const Vector& x0, double tol,
                                int max_iter);

BoxQpResult solve_box_qp(BoxQpSolverKind kind, const BoxQpProblem& p, const Vector& x0,
                         double tol, int max_iter);

}  // namespace drlr
