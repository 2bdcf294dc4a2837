#include "drlr/trace.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace drlr {

namespace {
std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace, std::optional<double> ref_objective) {
  if (!trace.solver.empty()) os << "# solver=" << trace.solver << '\n';
  for (const auto& [key, value] : trace.header) os << "# " << key << '=' << value << '\n';
  os << "iter,objective,primal_residual,kkt_residual,rho,elapsed_ms";
  if (ref_objective) os << ",suboptimality";
  os << '\n';
  double best = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) {
    os << r.iter << ',' << fmt_double(r.objective) << ',' << fmt_double(r.primal_residual) << ','
       << fmt_double(r.kkt_residual) << ',' << fmt_double(r.rho) << ','
       << fmt_double(r.elapsed_ms);
    if (ref_objective) {
      best = std::min(best, r.objective);
      os << ',' << fmt_double(best - *ref_objective);
    }
    os << '\n';
  }
}

}  // namespace drlr
