#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drlr::cli {

enum ExitCode { kOk = 0, kError = 1, kNotConverged = 2 };

/// Runs the drlr command line (args excludes the program name). Results go to
/// `out`, diagnostics and error messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;  // N - 1 denominator; 0 for a single sample
};

SampleStats sample_stats(const std::vector<double>& xs);

}  // namespace drlr::cli
