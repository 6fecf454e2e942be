#include "couette/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#ifndef LAPACK_COMPLEX_CPP
#define LAPACK_COMPLEX_CPP
#endif
#include <lapacke.h>

namespace couette {

namespace {

constexpr double kStretchRate = 2.0;

void require_same_size(const RadialGrid& g, const GridFunction& f, const char* where) {
  if (f.size() != g.r.size()) {
    throw std::invalid_argument(
        fmt::format("{}: grid has {} nodes but the function has {} entries", where,
                    g.r.size(), f.size()));
  }
}

// Derivative weights at point t from three abscissae, by differentiating the
// Lagrange basis. order 1 gives the slope at t, order 2 the curvature
// (independent of t for three points).
struct Stencil {
  double c0, c1, c2;
};

Stencil lagrange_weights(double x0, double x1, double x2, double t, int order) {
  if (order == 1) {
    return Stencil{(2.0 * t - x1 - x2) / ((x0 - x1) * (x0 - x2)),
                   (2.0 * t - x0 - x2) / ((x1 - x0) * (x1 - x2)),
                   (2.0 * t - x0 - x1) / ((x2 - x0) * (x2 - x1))};
  }
  return Stencil{2.0 / ((x0 - x1) * (x0 - x2)), 2.0 / ((x1 - x0) * (x1 - x2)),
                 2.0 / ((x2 - x0) * (x2 - x1))};
}

}  // namespace

double RadialGrid::spacing() const {
  if (scheme != GridScheme::uniform) {
    throw std::logic_error("spacing: not a uniform grid");
  }
  return r_max / static_cast<double>(r.size());
}

RadialGrid build_grid(int n, double r_max, GridScheme scheme) {
  if (n < 16) {
    throw std::invalid_argument(fmt::format("build_grid: need at least 16 nodes, got {}", n));
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw std::invalid_argument(fmt::format("build_grid: r_max must be positive, got {}", r_max));
  }
  RadialGrid g;
  g.r_max = r_max;
  g.scheme = scheme;
  g.r.resize(n);
  g.q.resize(n);
  if (scheme == GridScheme::uniform) {
    const double h = r_max / n;
    for (int j = 0; j < n; ++j) {
      g.r[j] = (j + 0.5) * h;
      g.q[j] = h;
    }
  } else {
    // Midpoints of equal cells in a mapped coordinate, clustered toward the
    // origin; weights are the cell images.
    const double a = kStretchRate;
    const double denom = std::expm1(a);
    auto map = [&](double s) { return r_max * std::expm1(a * s) / denom; };
    for (int j = 0; j < n; ++j) {
      const double s_mid = (j + 0.5) / n;
      g.r[j] = map(s_mid);
      g.q[j] = map((j + 1.0) / n) - map(static_cast<double>(j) / n);
    }
  }
  return g;
}

StencilRows derivative_rows(const RadialGrid& g, int order, EndRows ends) {
  if (order != 1 && order != 2) {
    throw std::invalid_argument(fmt::format("derivative_rows: order must be 1 or 2, got {}", order));
  }
  const int n = g.n();
  const auto& r = g.r;
  StencilRows rows;
  rows.lower = Eigen::ArrayXd::Zero(n);
  rows.center = Eigen::ArrayXd::Zero(n);
  rows.upper = Eigen::ArrayXd::Zero(n);
  for (int j = 1; j + 1 < n; ++j) {
    const Stencil w = lagrange_weights(r[j - 1], r[j], r[j + 1], r[j], order);
    rows.lower[j] = w.c0;
    rows.center[j] = w.c1;
    rows.upper[j] = w.c2;
  }
  if (ends == EndRows::dirichlet) {
    // Ghost nodes mirror the first and last nodes through the walls with
    // opposite sign, matching the zero boundary values.
    const Stencil w0 = lagrange_weights(-r[0], r[0], r[1], r[0], order);
    rows.center[0] = w0.c1 - w0.c0;
    rows.upper[0] = w0.c2;
    const double ghost = 2.0 * g.r_max - r[n - 1];
    const Stencil wn = lagrange_weights(r[n - 2], r[n - 1], ghost, r[n - 1], order);
    rows.lower[n - 1] = wn.c0;
    rows.center[n - 1] = wn.c1 - wn.c2;
  } else {
    // Interior-only stencils; the end rows reach two nodes inward, so the
    // caller folds them in explicitly (differentiate below does).
    const Stencil w0 = lagrange_weights(r[0], r[1], r[2], r[0], order);
    rows.center[0] = w0.c0;
    rows.upper[0] = w0.c1;
    rows.lower[0] = w0.c2;  // weight of node 2, applied by differentiate only
    const Stencil wn = lagrange_weights(r[n - 3], r[n - 2], r[n - 1], r[n - 1], order);
    rows.center[n - 1] = wn.c2;
    rows.lower[n - 1] = wn.c1;
    rows.upper[n - 1] = wn.c0;  // weight of node n-3, applied by differentiate only
  }
  return rows;
}

GridFunction differentiate(const RadialGrid& g, const GridFunction& f, int order,
                           EndRows ends) {
  require_same_size(g, f, "differentiate");
  const int n = g.n();
  const StencilRows rows = derivative_rows(g, order, ends);
  GridFunction out(n);
  for (int j = 1; j + 1 < n; ++j) {
    out[j] = rows.lower[j] * f[j - 1] + rows.center[j] * f[j] + rows.upper[j] * f[j + 1];
  }
  if (ends == EndRows::dirichlet) {
    out[0] = rows.center[0] * f[0] + rows.upper[0] * f[1];
    out[n - 1] = rows.lower[n - 1] * f[n - 2] + rows.center[n - 1] * f[n - 1];
  } else {
    out[0] = rows.center[0] * f[0] + rows.upper[0] * f[1] + rows.lower[0] * f[2];
    out[n - 1] = rows.center[n - 1] * f[n - 1] + rows.lower[n - 1] * f[n - 2] +
                 rows.upper[n - 1] * f[n - 3];
  }
  return out;
}

std::complex<double> inner(const RadialGrid& g, const GridFunction& a, const GridFunction& b) {
  require_same_size(g, a, "inner");
  require_same_size(g, b, "inner");
  std::complex<double> acc = 0.0;
  for (int j = 0; j < g.n(); ++j) {
    acc += g.q[j] * a[j] * std::conj(b[j]);
  }
  return acc;
}

H1Form h1_form(const RadialGrid& g) {
  const int n = g.n();
  H1Form form;
  form.diag.resize(n);
  form.sub.resize(n - 1);
  // Stiffness of first differences over the cells between nodes, with half
  // cells tying the first and last nodes to the walls.
  Eigen::ArrayXd inv_len(n + 1);
  inv_len[0] = 1.0 / g.r[0];
  for (int j = 1; j < n; ++j) {
    inv_len[j] = 1.0 / (g.r[j] - g.r[j - 1]);
  }
  inv_len[n] = 1.0 / (g.r_max - g.r[n - 1]);
  for (int j = 0; j < n; ++j) {
    form.diag[j] = g.q[j] + inv_len[j] + inv_len[j + 1];
  }
  for (int j = 0; j + 1 < n; ++j) {
    form.sub[j] = -inv_len[j + 1];
  }
  return form;
}

DualNormSolver::DualNormSolver(const RadialGrid& g) : grid_(&g), form_(h1_form(g)) {
  fac_d_ = form_.diag;
  fac_e_ = form_.sub;
  const auto info = LAPACKE_dpttrf(g.n(), fac_d_.data(), fac_e_.data());
  if (info != 0) {
    throw std::runtime_error(fmt::format("DualNormSolver: factorization failed, info={}", info));
  }
}

double DualNormSolver::h1_norm(const GridFunction& f) const {
  require_same_size(*grid_, f, "h1_norm");
  const int n = grid_->n();
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += form_.diag[j] * std::norm(f[j]);
  }
  for (int j = 0; j + 1 < n; ++j) {
    acc += 2.0 * form_.sub[j] * (f[j] * std::conj(f[j + 1])).real();
  }
  return std::sqrt(std::max(acc, 0.0));
}

Eigen::VectorXcd DualNormSolver::apply_inverse(const Eigen::VectorXcd& b) const {
  const int n = grid_->n();
  if (b.size() != n) {
    throw std::invalid_argument("apply_inverse: size mismatch");
  }
  Eigen::MatrixXd parts(n, 2);
  parts.col(0) = b.real();
  parts.col(1) = b.imag();
  const auto info = LAPACKE_dpttrs(LAPACK_COL_MAJOR, n, 2, fac_d_.data(), fac_e_.data(),
                                   parts.data(), n);
  if (info != 0) {
    throw std::runtime_error(fmt::format("apply_inverse: solve failed, info={}", info));
  }
  Eigen::VectorXcd out(n);
  out.real() = parts.col(0);
  out.imag() = parts.col(1);
  return out;
}

Eigen::VectorXcd DualNormSolver::apply_form(const Eigen::VectorXcd& x) const {
  const int n = grid_->n();
  if (x.size() != n) {
    throw std::invalid_argument("apply_form: size mismatch");
  }
  Eigen::VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    std::complex<double> acc = form_.diag[j] * x[j];
    if (j > 0) acc += form_.sub[j - 1] * x[j - 1];
    if (j + 1 < n) acc += form_.sub[j] * x[j + 1];
    out[j] = acc;
  }
  return out;
}

double DualNormSolver::dual_norm(const GridFunction& f) const {
  require_same_size(*grid_, f, "dual_norm");
  const int n = grid_->n();
  Eigen::VectorXcd mf(n);
  for (int j = 0; j < n; ++j) {
    mf[j] = grid_->q[j] * f[j];
  }
  const Eigen::VectorXcd x = apply_inverse(mf);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    acc += (mf[j] * std::conj(x[j])).real();
  }
  return std::sqrt(std::max(acc, 0.0));
}

double norm(const RadialGrid& g, const GridFunction& f, NormKind kind) {
  require_same_size(g, f, "norm");
  if (!f.allFinite()) {
    throw std::invalid_argument("norm: non-finite entries");
  }
  switch (kind) {
    case NormKind::L2: {
      double acc = 0.0;
      for (int j = 0; j < g.n(); ++j) acc += g.q[j] * std::norm(f[j]);
      return std::sqrt(acc);
    }
    case NormKind::X: {
      double acc = 0.0;
      for (int j = 0; j < g.n(); ++j) acc += g.q[j] * std::norm(f[j]) / (g.r[j] * g.r[j]);
      return std::sqrt(acc);
    }
    case NormKind::M: {
      double acc = 0.0;
      for (int j = 0; j < g.n(); ++j) {
        acc += g.q[j] * g.r[j] * std::exp(g.r[j] * g.r[j] / 4.0) * std::norm(f[j]);
      }
      return std::sqrt(acc);
    }
    case NormKind::H1:
      return DualNormSolver(g).h1_norm(f);
    case NormKind::Hm1:
      return DualNormSolver(g).dual_norm(f);
  }
  throw std::logic_error("norm: unknown kind");
}

}  // namespace couette
