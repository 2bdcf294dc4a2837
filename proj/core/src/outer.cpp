#include "drlr/outer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "drlr/lpadmm.hpp"

namespace drlr {

namespace {

constexpr double kLambdaBoundConstant = 0.2785;
constexpr double kMemoTol = 1e-12;
constexpr double kRelativeOuterTol = 1e-4;

class MemoizedObjective {
 public:
  explicit MemoizedObjective(const std::function<double(double)>& q) : q_(q) {}

  double operator()(double lambda, GoldenSearchResult& res) {
    for (const auto& p : res.probes) {
      if (std::abs(p.lambda - lambda) <= kMemoTol * std::max(1.0, std::abs(lambda))) {
        return p.value;
      }
    }
    const double v = q_(lambda);
    res.probes.push_back({lambda, v});
    ++res.evaluations;
    if (v < res.value || res.evaluations == 1) {
      res.value = v;
      res.lambda = lambda;
    }
    return v;
  }

 private:
  const std::function<double(double)>& q_;
};

}  // namespace

double lambda_upper_bound(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("lambda_upper_bound: epsilon must be > 0");
  return kLambdaBoundConstant / epsilon;
}

void GoldenSearchConfig::validate() const {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("golden search: ratio must be in (0, 1)");
  if (!(lambda_hi > lambda_lo)) throw std::invalid_argument("golden search: lambda_hi must exceed lambda_lo");
  if (!(interval_tol > 0.0)) throw std::invalid_argument("golden search: interval_tol must be > 0");
  if (max_evals < 2) throw std::invalid_argument("golden search: max_evals must be >= 2");
}

GoldenSearchResult golden_section_minimize(const std::function<double(double)>& q,
                                           const GoldenSearchConfig& cfg) {
  cfg.validate();
  GoldenSearchResult res;
  res.value = std::numeric_limits<double>::infinity();
  MemoizedObjective eval(q);

  const double r = cfg.ratio;
  double l1 = cfg.lambda_lo;
  double l4 = cfg.lambda_hi;
  res.brackets.emplace_back(l1, l4);
  eval(l1, res);
  eval(l4, res);

  while (l4 - l1 > cfg.interval_tol) {
    const double l2 = r * l1 + (1.0 - r) * l4;
    const double l3 = (1.0 - r) * l1 + r * l4;
    // Stop before a round that could exceed the evaluation budget.
    if (res.evaluations + 2 > cfg.max_evals) break;
    const double q2 = eval(l2, res);
    const double q3 = eval(l3, res);
    if (q2 < q3) {
      l4 = l3;
    } else {
      l1 = l2;
    }
    res.brackets.emplace_back(l1, l4);
  }
  res.bracket_converged = l4 - l1 <= cfg.interval_tol;
  return res;
}

Solution golden_section_solve(const Dataset& data, const DrlrConfig& cfg, BoxQpSolverKind inner,
                              GoldenSolveReport* report) {
  cfg.validate();
  const double upper = lambda_upper_bound(cfg.epsilon);

  GoldenSearchConfig gs;
  gs.lambda_lo = 0.0;
  gs.lambda_hi = upper;
  gs.interval_tol = cfg.outer_tol.value_or(kRelativeOuterTol * upper);

  // Solved subproblems keyed by lambda, for warm starts and the final answer.
  std::map<double, Solution> solved;
  const SubproblemInstance base(data, 0.0, cfg.kappa);

  auto q = [&](double lambda) {
    const SubproblemInstance inst = base.with_lambda(lambda);
    std::optional<WarmStart> warm;
    if (!solved.empty()) {
      auto it = solved.lower_bound(lambda);
      if (it == solved.end() ||
          (it != solved.begin() && std::abs(std::prev(it)->first - lambda) < std::abs(it->first - lambda))) {
        it = std::prev(it);
      }
      warm = WarmStart{it->second.beta, *it->second.mu, *it->second.w};
    }
    SubproblemResult res = solve_subproblem(inst, cfg, inner, warm);
    if (res.solution.status == Status::Diverged) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "subproblem diverged at lambda=" << lambda;
      throw std::runtime_error(msg.str());
    }
    const double value = lambda * cfg.epsilon + res.solution.objective;
    solved[lambda] = res.solution;
    if (report) {
      report->subproblems.push_back(res.solution);
      report->traces.push_back(std::move(res.trace));
    }
    return value;
  };

  GoldenSearchResult search = golden_section_minimize(q, gs);

  const Solution& best = solved.at(search.lambda);
  Solution out = best;
  out.lambda = search.lambda;
  out.objective = drlr_objective(best.beta, search.lambda, data, cfg);
  bool all_converged = true;
  for (const auto& [lambda, s] : solved) {
    if (s.status != Status::Converged) all_converged = false;
  }
  out.status = (search.bracket_converged && all_converged) ? Status::Converged : Status::MaxIter;
  out.iterations = 0;
  for (const auto& [lambda, s] : solved) out.iterations += s.iterations;
  if (!search.bracket_converged) out.warnings.push_back("golden-section search hit max_evals");
  if (report) report->search = std::move(search);
  return out;
}

}  // namespace drlr
