#include "couette/fit.hpp"

#include <cmath>

namespace couette {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit fit;
  const int n = static_cast<int>(std::min(x.size(), y.size()));
  fit.points = n;
  if (n < 2) {
    return fit;
  }
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) {
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  const int n = static_cast<int>(std::min(x.size(), y.size()));
  lx.reserve(n);
  ly.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

}  // namespace couette
