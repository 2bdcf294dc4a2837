#pragma once

#include <functional>
#include <vector>

#include "drlr/boxqp.hpp"
#include "drlr/model.hpp"
#include "drlr/trace.hpp"

namespace drlr {

// Upper bound on the optimal lambda: 0.2785 / epsilon. Throws for epsilon <= 0.
double lambda_upper_bound(double epsilon);

// (sqrt(5) - 1) / 2. Interior probes are reused exactly across iterations.
inline constexpr double kGoldenRatioConjugate = 0.6180339887498949;

struct GoldenSearchConfig {
  double ratio = kGoldenRatioConjugate;
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  double interval_tol = 1e-4;
  int max_evals = 200;

  void validate() const;
};

struct GoldenProbe {
  double lambda;
  double value;
};

struct GoldenSearchResult {
  double lambda = 0.0;  // best evaluated point
  double value = 0.0;
  int evaluations = 0;
  bool bracket_converged = false;
  // Bracket [lambda_1, lambda_4] after each shrink, starting with the initial one.
  std::vector<std::pair<double, double>> brackets;
  std::vector<GoldenProbe> probes;  // in evaluation order
};

/// Golden-section search on [lambda_lo, lambda_hi] for a unimodal q.
///
/// Each round probes lambda_2 = r l1 + (1-r) l4 and lambda_3 = (1-r) l1 + r l4
/// and keeps [l1, l3] when q(l2) < q(l3), else [l2, l4]. Values are memoized
/// by lambda (within 1e-12) so each distinct point is evaluated once.
GoldenSearchResult golden_section_minimize(const std::function<double(double)>& q,
                                           const GoldenSearchConfig& cfg);

struct GoldenSolveReport {
  GoldenSearchResult search;
  std::vector<Solution> subproblems;  // one per distinct probe, in evaluation order
  std::vector<Trace> traces;          // matching subproblem traces
};

/// Solves the full problem over (lambda, beta): golden-section search over
/// [0, 0.2785/epsilon] where each q(lambda) is an LP-ADMM subproblem solve
/// warm-started from the nearest lambda solved so far.
///
/// Returns the best evaluated (beta, lambda) with objective = drlr_objective.
/// A diverged subproblem throws std::runtime_error naming the lambda.
Solution golden_section_solve(const Dataset& data, const DrlrConfig& cfg, BoxQpSolverKind inner,
                              GoldenSolveReport* report = nullptr);

}  // namespace drlr
