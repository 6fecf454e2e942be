#include "couette/stream.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "couette/operators.hpp"
#include "couette/rng.hpp"

namespace couette {

namespace {

// 4-point Gauss-Legendre rule on [-1, 1].
constexpr double kGaussNode = 0.3399810435848562648026658;
constexpr double kGaussNodeOuter = 0.8611363115940525752239465;
constexpr double kGaussWeight = 0.6521451548625461426269361;
constexpr double kGaussWeightOuter = 0.3478548451374538573730639;

struct GaussCell {
  double x[4];
  double w[4];
};

GaussCell gauss_cell(double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  GaussCell c;
  c.x[0] = mid - half * kGaussNodeOuter;
  c.x[1] = mid - half * kGaussNode;
  c.x[2] = mid + half * kGaussNode;
  c.x[3] = mid + half * kGaussNodeOuter;
  c.w[0] = c.w[3] = half * kGaussWeightOuter;
  c.w[1] = c.w[2] = half * kGaussWeight;
  return c;
}

double euler_q(double r, int k) {
  const double k2 = static_cast<double>(k) * k;
  return (k2 - 0.25) / (r * r);
}

}  // namespace

StreamSolver::StreamSolver(const RadialGrid& g, int k_max) : grid_(&g), k_max_(k_max) {
  if (k_max < 1) {
    throw std::invalid_argument(fmt::format("StreamSolver: k_max must be >= 1, got {}", k_max));
  }
  const int n = g.n();
  const bool numerov = g.scheme == GridScheme::uniform;
  const double h = numerov ? g.spacing() : 0.0;
  const StencilRows d2 =
      numerov ? StencilRows{} : derivative_rows(g, 2, EndRows::dirichlet);

  lu_.reserve(k_max);
  rhs_weights_.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    BandedComplexOperator a = BandedComplexOperator::zeros(n, 1, 1);
    BandedComplexOperator rhs = BandedComplexOperator::zeros(n, 1, 1);
    a.k = k;
    rhs.k = k;
    for (int j = 1; j + 1 < n; ++j) {
      if (numerov) {
        const double h2_12 = h * h / 12.0;
        a.at(j, j - 1) = 1.0 - h2_12 * euler_q(g.r[j - 1], k);
        a.at(j, j) = -2.0 - 10.0 * h2_12 * euler_q(g.r[j], k);
        a.at(j, j + 1) = 1.0 - h2_12 * euler_q(g.r[j + 1], k);
        rhs.at(j, j - 1) = h2_12;
        rhs.at(j, j) = 10.0 * h2_12;
        rhs.at(j, j + 1) = h2_12;
      } else {
        a.at(j, j - 1) = d2.lower[j];
        a.at(j, j) = d2.center[j] - euler_q(g.r[j], k);
        a.at(j, j + 1) = d2.upper[j];
        rhs.at(j, j) = 1.0;
      }
    }
    // End rows pin the solution to the decaying power-law branches of the
    // homogeneous equation on both sides.
    a.at(0, 0) = 1.0;
    a.at(0, 1) = -std::pow(g.r[0] / g.r[1], 0.5 + k);
    a.at(n - 1, n - 1) = 1.0;
    a.at(n - 1, n - 2) = -std::pow(g.r[n - 1] / g.r[n - 2], 0.5 - k);
    lu_.emplace_back(a);
    rhs_weights_.push_back(std::move(rhs));
  }
}

GridFunction StreamSolver::solve_source(int k, const GridFunction& source) const {
  const int kk = std::abs(k);
  if (kk < 1 || kk > k_max_) {
    throw std::invalid_argument(
        fmt::format("StreamSolver: wavenumber {} outside cached range 1..{}", k, k_max_));
  }
  if (source.size() != grid_->n()) {
    throw std::invalid_argument("StreamSolver: source size mismatch");
  }
  GridFunction b = rhs_weights_[kk - 1].apply(source);
  lu_[kk - 1].solve_in_place(b);
  return b;
}

StreamPair StreamSolver::solve(int k, const GridFunction& w) const {
  const int n = grid_->n();
  GridFunction source(n);
  for (int j = 0; j < n; ++j) {
    const double r = grid_->r[j];
    source[j] = std::exp(-r * r / 8.0) * w[j];
  }
  StreamPair pair;
  pair.k = k;
  pair.phi = solve_source(k, source);
  pair.phi_breve.resize(n);
  for (int j = 0; j < n; ++j) {
    pair.phi_breve[j] = pair.phi[j] / std::sqrt(grid_->r[j]);
  }
  return pair;
}

StreamPair solve_stream(const RadialGrid& g, int k, const GridFunction& w) {
  return StreamSolver(g, std::abs(k)).solve(k, w);
}

GridFunction zero_mode_stream_derivative(const RadialGrid& g, const GridFunction& w0) {
  const int n = g.n();
  if (w0.size() != n) {
    throw std::invalid_argument("zero_mode_stream_derivative: size mismatch");
  }
  // Prefix integrals of s^{1/2} e^{-s^2/8} w0(s) over the cells between
  // nodes, integrating the piecewise-linear interpolant of w0 by Gauss
  // quadrature; the head cell extends the first segment's slope to r = 0.
  GridFunction out(n);
  std::complex<double> prefix = 0.0;
  auto weight = [](double s) { return std::sqrt(s) * std::exp(-s * s / 8.0); };
  {
    const double r0 = g.r[0];
    const double r1 = g.r[1];
    const GaussCell c = gauss_cell(0.0, r0);
    std::complex<double> acc = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double t = (c.x[q] - r0) / (r1 - r0);
      const std::complex<double> val = w0[0] + (w0[1] - w0[0]) * t;
      acc += c.w[q] * weight(c.x[q]) * val;
    }
    prefix += acc;
    out[0] = prefix / r0;
  }
  for (int j = 1; j < n; ++j) {
    const double ra = g.r[j - 1];
    const double rb = g.r[j];
    const GaussCell c = gauss_cell(ra, rb);
    std::complex<double> acc = 0.0;
    for (int q = 0; q < 4; ++q) {
      const double t = (c.x[q] - ra) / (rb - ra);
      const std::complex<double> val = w0[j - 1] + (w0[j] - w0[j - 1]) * t;
      acc += c.w[q] * weight(c.x[q]) * val;
    }
    prefix += acc;
    out[j] = prefix / rb;
  }
  return out;
}

std::vector<EllipticAuditRow> elliptic_estimate_audit(const RadialGrid& g,
                                                      const std::vector<double>& betas,
                                                      const std::vector<int>& ks,
                                                      int n_samples, std::uint64_t seed) {
  const int n = g.n();
  int k_max = 1;
  for (int k : ks) k_max = std::max(k_max, std::abs(k));
  const StreamSolver solver(g, k_max);
  std::vector<EllipticAuditRow> rows;
  Rng rng(seed);

  for (const double beta : betas) {
    for (const int k : ks) {
      EllipticAuditRow row;
      row.k = k;
      row.beta = beta;
      row.samples = n_samples;
      row.feasible = std::abs(beta) < 2.0 * std::abs(k);
      if (!row.feasible || k == 0) {
        row.feasible = false;
        rows.push_back(row);
        continue;
      }
      row.min_coercivity = std::numeric_limits<double>::infinity();
      const double k2 = static_cast<double>(k) * k;
      for (int sample = 0; sample < n_samples; ++sample) {
        const GridFunction source = random_test_function(g, rng.next());
        const GridFunction phi = solver.solve_source(k, source);
        const GridFunction dphi = differentiate(g, phi, 1, EndRows::one_sided);
        GridFunction d2phi(n);
        for (int j = 0; j < n; ++j) {
          d2phi[j] = euler_q(g.r[j], k) * phi[j] + source[j];
        }

        double lhs = 0.0;      // Re<-source, r^beta phi>
        double grad2 = 0.0;    // ||r^{beta/2} phi'||^2
        double val2 = 0.0;     // ||r^{beta/2-1} phi||^2
        double second2 = 0.0;  // ||r^{beta/2+1} phi''||^2
        double denom2 = 0.0;   // ||r^{beta/2+1} source||^2
        double grad_sup = 0.0, val_sup = 0.0;
        for (int j = 0; j < n; ++j) {
          const double r = g.r[j];
          const double rb = std::pow(r, beta);
          lhs -= g.q[j] * rb * (source[j] * std::conj(phi[j])).real();
          grad2 += g.q[j] * rb * std::norm(dphi[j]);
          val2 += g.q[j] * rb / (r * r) * std::norm(phi[j]);
          second2 += g.q[j] * rb * r * r * std::norm(d2phi[j]);
          denom2 += g.q[j] * rb * r * r * std::norm(source[j]);
          grad_sup = std::max(grad_sup, rb * r * std::norm(dphi[j]));
          val_sup = std::max(val_sup, rb / r * std::norm(phi[j]));
        }
        const double rhs = grad2 + (k2 - 0.25 - beta * (beta - 1.0) / 2.0) * val2;
        const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
        row.identity_residual =
            std::max(row.identity_residual, std::abs(lhs - rhs) / scale);

        const double coercive = grad2 + k2 * val2;
        if (coercive > 0.0) {
          row.min_coercivity = std::min(row.min_coercivity, lhs / coercive);
        }
        const double d = std::sqrt(denom2);
        if (d > 0.0) {
          const double ak = std::abs(k);
          row.c_second = std::max(row.c_second, std::sqrt(second2) / d);
          row.c_grad_sup = std::max(row.c_grad_sup, std::sqrt(ak * grad_sup) / d);
          row.c_grad = std::max(row.c_grad, ak * std::sqrt(grad2) / d);
          row.c_val_sup = std::max(row.c_val_sup, std::pow(ak, 1.5) * std::sqrt(val_sup) / d);
          row.c_val = std::max(row.c_val, k2 * std::sqrt(val2) / d);
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace couette
