#include "couette/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "couette/rng.hpp"

namespace couette {

namespace {

BandedComplexOperator assemble_mode_operator(const RadialGrid& g, const FlowParams& p, int k) {
  const int n = g.n();
  const StencilRows d2 = derivative_rows(g, 2, EndRows::dirichlet);
  BandedComplexOperator op = BandedComplexOperator::zeros(n, 1, 1);
  op.k = k;
  const double kb = p.beta(k);
  const double k2 = static_cast<double>(k) * k;
  for (int j = 0; j < n; ++j) {
    const double r = g.r[j];
    const double r2 = r * r;
    const double potential = (k2 - 0.25) / r2 + r2 / 16.0 - 0.5;
    op.at(j, j) = std::complex<double>(-d2.center[j] + potential, kb / r2);
    if (j > 0) op.at(j, j - 1) = -d2.lower[j];
    if (j + 1 < n) op.at(j, j + 1) = -d2.upper[j];
  }
  return op;
}

}  // namespace

BandedComplexOperator assemble_Lk(const RadialGrid& g, const FlowParams& p, int k) {
  if (k == 0) {
    throw std::invalid_argument("assemble_Lk: k = 0 has its own assembly, use assemble_zero_mode");
  }
  return assemble_mode_operator(g, p, k);
}

BandedComplexOperator assemble_zero_mode(const RadialGrid& g, const FlowParams& p) {
  return assemble_mode_operator(g, p, 0);
}

BandedComplexOperator resolvent_matrix(const BandedComplexOperator& a, double s) {
  BandedComplexOperator out = a;
  out.add_to_diagonal(std::complex<double>(0.0, -s));
  out.shift_imag += s;
  return out;
}

BandedComplexOperator shifted_matrix(const BandedComplexOperator& a, double c) {
  BandedComplexOperator out = a;
  out.add_to_diagonal(std::complex<double>(-c, 0.0));
  out.shift_real += c;
  return out;
}

GridFunction random_test_function(const RadialGrid& g, std::uint64_t seed) {
  Rng rng(seed);
  const int n = g.n();
  const double h_edge = g.r[0] * 2.0;
  GridFunction w = GridFunction::Zero(n);
  const int bumps = rng.uniform_int(3, 8);
  for (int b = 0; b < bumps; ++b) {
    const double sigma = rng.uniform(0.2, 1.0);
    const double lo = std::min(std::max(2.0 * h_edge, 4.0 * sigma), 0.4 * g.r_max);
    const double center = rng.uniform(lo, g.r_max / 2.0);
    const std::complex<double> amp(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    for (int j = 0; j < n; ++j) {
      const double t = (g.r[j] - center) / sigma;
      w[j] += amp * std::exp(-t * t);
    }
  }
  return w;
}

CoercivityReport coercivity_audit(const RadialGrid& g, const FlowParams& p, int k,
                                  int n_samples, std::uint64_t seed) {
  if (k == 0) {
    throw std::invalid_argument("coercivity_audit: nonzero wavenumber required");
  }
  const int n = g.n();
  const BandedComplexOperator op = assemble_mode_operator(g, p, k);
  const DualNormSolver dual(g);
  Rng rng(seed);

  // Gauge profile h with L_k h = (|k|/2) h at |k| = 1; the identities divide
  // by it, so precompute nodal values once.
  Eigen::ArrayXd hprof(n), hprof_over_r(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r[j];
    hprof[j] = std::pow(r, 1.5) * std::exp(-r * r / 8.0);
    hprof_over_r[j] = hprof[j] / r;
  }

  CoercivityReport report;
  report.k = k;
  report.samples = n_samples;
  report.min_rayleigh = std::numeric_limits<double>::infinity();
  const double beta = p.beta(k);
  for (int sample = 0; sample < n_samples; ++sample) {
    const GridFunction w = random_test_function(g, rng.next());
    const GridFunction lw = op.apply(w);
    const double nw2 = std::pow(norm(g, w, NormKind::L2), 2);
    if (nw2 == 0.0) continue;

    const double rayleigh = inner(g, lw, w).real() / nw2;
    report.min_rayleigh = std::min(report.min_rayleigh, rayleigh);

    // Divided-gauge gradient, shared by both identities.
    GridFunction u(n);
    for (int j = 0; j < n; ++j) u[j] = w[j] / hprof[j];
    const GridFunction du = differentiate(g, u, 1, EndRows::one_sided);

    if (std::abs(k) == 1) {
      double grad2 = 0.0;
      for (int j = 0; j < n; ++j) grad2 += g.q[j] * std::norm(hprof[j] * du[j]);
      const double lhs = inner(g, lw, w).real();
      const double rhs = grad2 + 0.5 * nw2;
      report.max_factorization_residual = std::max(
          report.max_factorization_residual, std::abs(lhs - rhs) / std::max(lhs, rhs));
    }
    {
      GridFunction w_r2(n);
      for (int j = 0; j < n; ++j) w_r2[j] = w[j] / (g.r[j] * g.r[j]);
      const double lhs = inner(g, lw, w_r2).real();
      double grad2 = 0.0;
      for (int j = 0; j < n; ++j) grad2 += g.q[j] * std::norm(hprof_over_r[j] * du[j]);
      const double k2m1 = static_cast<double>(k) * k - 1.0;
      const double rhs = grad2 + k2m1 * std::pow(norm(g, w_r2, NormKind::L2), 2);
      report.max_weighted_residual =
          std::max(report.max_weighted_residual,
                   std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }

    const double shifts[3] = {0.0, 0.5 * beta, beta * rng.uniform()};
    for (const double s : shifts) {
      GridFunction f = lw;
      for (int j = 0; j < n; ++j) f[j] -= std::complex<double>(0.0, s) * w[j];
      const double nf = norm(g, f, NormKind::L2);
      if (nf == 0.0) continue;
      report.max_l2_ratio =
          std::max(report.max_l2_ratio, std::abs(k) * std::sqrt(nw2) / nf);
      report.max_h1_ratio = std::max(
          report.max_h1_ratio, std::sqrt(std::abs(k)) * dual.h1_norm(w) / nf);
    }
  }
  return report;
}

}  // namespace couette
