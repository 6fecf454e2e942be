#pragma once

#include <vector>

namespace couette {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
  int points = 0;
};

// Ordinary least squares y = slope * x + intercept.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Least squares of log y against log x; non-positive entries are skipped.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace couette
