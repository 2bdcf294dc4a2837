#pragma once

#include <chrono>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace drlr {

struct TraceRecord {
  int iter = 0;
  // Subproblem value F(beta^k, Z beta^k) of the current primal point.
  double objective = 0.0;
  double primal_residual = 0.0;
  double kkt_residual = 0.0;
  double rho = 0.0;
  double elapsed_ms = 0.0;

  // LP-ADMM diagnostics (absent for solvers that do not produce them).
  std::optional<double> lyapunov;            // m_k against a supplied reference point
  std::optional<double> averaged_objective;  // F(mean beta^{1..k}, mean mu^{1..k})
  std::optional<double> x_gap_sq;            // ||Z beta^{k} - mu^{k-1}||^2
  std::optional<double> mu_step_sq;          // ||mu^{k} - mu^{k-1}||^2
  bool inner_converged = true;
};

/// Per-iteration history of one subproblem solve. Record 0 is the initial point.
struct Trace {
  std::string solver;
  bool adaptive_penalty = false;
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<TraceRecord> records;

  void add_header(std::string key, std::string value) {
    header.emplace_back(std::move(key), std::move(value));
  }
};

// Columns: iter,objective,primal_residual,kkt_residual,rho,elapsed_ms and, when
// ref_objective is given, suboptimality = best-so-far objective - ref_objective.
// Header entries are written as leading "# key=value" comment lines.
void write_trace_csv(std::ostream& os, const Trace& trace,
                     std::optional<double> ref_objective = std::nullopt);

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace drlr
