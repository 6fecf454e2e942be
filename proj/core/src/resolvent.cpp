#include "couette/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "couette/rng.hpp"

namespace couette {

namespace {

bool is_dual_pair(NormPair pair) {
  return pair == NormPair::hm1_shifted || pair == NormPair::x_hm1_shifted;
}

bool is_x_weighted(NormPair pair) {
  return pair == NormPair::x_to_x || pair == NormPair::x_hm1_shifted;
}

// Similarity transform D A D^{-1} with a positive diagonal, band-preserving.
BandedComplexOperator diagonal_similarity(const BandedComplexOperator& a,
                                          const Eigen::ArrayXd& d) {
  BandedComplexOperator out = a;
  for (int j = 0; j < a.n; ++j) {
    const int i_lo = std::max(0, j - a.ku);
    const int i_hi = std::min(a.n - 1, j + a.kl);
    for (int i = i_lo; i <= i_hi; ++i) {
      out.at(i, j) = a.get(i, j) * (d[i] / d[j]);
    }
  }
  return out;
}

// Shifted operator realized in the coordinates of the requested norm pair.
BandedComplexOperator build_pair_operator(const RadialGrid& g, const FlowParams& p, int k,
                                          double s, NormPair pair, double c2) {
  BandedComplexOperator op =
      k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
  op = resolvent_matrix(op, s);
  const double beta = std::abs(p.beta(k));
  if (is_dual_pair(pair)) {
    op = shifted_matrix(op, c2 * std::cbrt(beta));
  }
  Eigen::ArrayXd d(g.n());
  if (is_dual_pair(pair)) {
    // Dual pairs keep grid coordinates; only the 1/r conjugation applies.
    if (is_x_weighted(pair)) {
      for (int j = 0; j < g.n(); ++j) d[j] = 1.0 / g.r[j];
      op = diagonal_similarity(op, d);
    }
    return op;
  }
  for (int j = 0; j < g.n(); ++j) {
    d[j] = std::sqrt(g.q[j]);
    if (is_x_weighted(pair)) d[j] /= g.r[j];
  }
  return diagonal_similarity(op, d);
}

Eigen::VectorXcd seed_vector(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXcd v(n);
  for (int j = 0; j < n; ++j) {
    v[j] = std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  v /= v.norm();
  return v;
}

// Inverse iteration on G^H G for the plain norm pairs.
SigmaMinResult sigma_min_euclidean(const BandedComplexOperator& gop,
                                   const SigmaMinOptions& opt,
                                   const Eigen::VectorXcd* warm_start) {
  SigmaMinResult res;
  const int n = gop.n;
  const BandedLU lu(gop);
  if (!lu.factorized()) {
    // An exactly singular shift: the smallest singular value is zero.
    res.sigma = 0.0;
    res.converged = true;
    res.vector = seed_vector(n, opt.seed);
    return res;
  }
  Eigen::VectorXcd v = (warm_start && warm_start->size() == n) ? warm_start->normalized()
                                                               : seed_vector(n, opt.seed);
  double sigma_prev = std::numeric_limits<double>::infinity();
  int stable = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    Eigen::VectorXcd y = lu.solve_adjoint(v);
    lu.solve_in_place(y);
    const double rho = (v.dot(y)).real();  // v^H (G^H G)^{-1} v, real positive
    res.iterations = it;
    if (!(rho > 0.0) || !y.allFinite()) {
      res.converged = false;
      res.vector = v;
      res.sigma = gop.apply(v).norm();
      return res;
    }
    const double sigma = 1.0 / std::sqrt(rho);
    v = y / y.norm();
    if (std::abs(sigma - sigma_prev) <= opt.tol * sigma) {
      ++stable;
    } else {
      stable = 0;
    }
    sigma_prev = sigma;
    if (stable >= 2) {
      const Eigen::VectorXcd gv = gop.apply(v);
      const Eigen::VectorXcd normal = gop.apply_adjoint(gv);
      const double s2 = gv.squaredNorm();
      res.residual = (normal - s2 * v).norm() / std::max(s2, 1e-300);
      if (res.residual <= opt.residual_tol) {
        res.sigma = gv.norm();
        res.converged = true;
        res.vector = v;
        return res;
      }
      stable = 0;
    }
  }
  res.vector = v;
  res.sigma = gop.apply(v).norm();
  res.converged = false;
  return res;
}

// Inverse iteration for the dual-norm pairs: generalized problem
// G^H M S^{-1} M G v = sigma^2 (S + |kB|^{1/3} M) v on grid coordinates.
SigmaMinResult sigma_min_dual(const RadialGrid& g, const BandedComplexOperator& gop,
                              double beta_abs, const SigmaMinOptions& opt,
                              const Eigen::VectorXcd* warm_start) {
  SigmaMinResult res;
  const int n = gop.n;
  const DualNormSolver dual(g);
  const double mu = std::cbrt(beta_abs);
  const BandedLU lu(gop);
  if (!lu.factorized()) {
    res.sigma = 0.0;
    res.converged = true;
    res.vector = seed_vector(n, opt.seed);
    return res;
  }
  const Eigen::ArrayXd& q = g.q;

  auto h_hat_apply = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd out = dual.apply_form(v);
    for (int j = 0; j < n; ++j) out[j] += mu * q[j] * v[j];
    return out;
  };
  auto q_apply = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd t = gop.apply(v);
    for (int j = 0; j < n; ++j) t[j] *= q[j];
    t = dual.apply_inverse(t);
    for (int j = 0; j < n; ++j) t[j] *= q[j];
    return gop.apply_adjoint(t);
  };
  auto rayleigh = [&](const Eigen::VectorXcd& v, double& den_out) {
    Eigen::VectorXcd gv = gop.apply(v);
    Eigen::VectorXcd mgv = gv;
    for (int j = 0; j < n; ++j) mgv[j] *= q[j];
    const Eigen::VectorXcd sx = dual.apply_inverse(mgv);
    const double num = (mgv.dot(sx)).real();
    const double den = (v.dot(h_hat_apply(v))).real();
    den_out = den;
    return num / std::max(den, 1e-300);
  };

  Eigen::VectorXcd v = (warm_start && warm_start->size() == n) ? warm_start->normalized()
                                                               : seed_vector(n, opt.seed);
  double sigma_prev = std::numeric_limits<double>::infinity();
  int stable = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    // y = G^{-1} M^{-1} S M^{-1} G^{-H} (H_hat v)
    Eigen::VectorXcd y = h_hat_apply(v);
    y = lu.solve_adjoint(y);
    for (int j = 0; j < n; ++j) y[j] /= q[j];
    y = dual.apply_form(y);
    for (int j = 0; j < n; ++j) y[j] /= q[j];
    lu.solve_in_place(y);
    res.iterations = it;
    if (!y.allFinite() || y.norm() == 0.0) {
      res.converged = false;
      break;
    }
    v = y / y.norm();
    double den = 0.0;
    const double rho = rayleigh(v, den);
    const double sigma = std::sqrt(std::max(rho, 0.0));
    if (sigma_prev < std::numeric_limits<double>::infinity() &&
        std::abs(sigma - sigma_prev) <= opt.tol * std::max(sigma, 1e-300)) {
      ++stable;
    } else {
      stable = 0;
    }
    sigma_prev = sigma;
    if (stable >= 2) {
      const Eigen::VectorXcd lhs = q_apply(v);
      const Eigen::VectorXcd rhs = h_hat_apply(v);
      const double s2 = rho;
      res.residual = (lhs - s2 * rhs).norm() / std::max(s2 * rhs.norm(), 1e-300);
      if (res.residual <= opt.residual_tol) {
        res.sigma = sigma;
        res.converged = true;
        res.vector = v;
        return res;
      }
      stable = 0;
    }
  }
  res.vector = v;
  double den = 0.0;
  res.sigma = std::sqrt(std::max(rayleigh(v, den), 0.0));
  res.converged = false;
  return res;
}

}  // namespace

std::string to_string(NormPair pair) {
  switch (pair) {
    case NormPair::l2_to_l2:
      return "l2";
    case NormPair::x_to_x:
      return "x";
    case NormPair::hm1_shifted:
      return "hm1-shifted";
    case NormPair::x_hm1_shifted:
      return "x-hm1-shifted";
  }
  return "unknown";
}

NormPair norm_pair_from_string(const std::string& name) {
  if (name == "l2") return NormPair::l2_to_l2;
  if (name == "x") return NormPair::x_to_x;
  if (name == "hm1-shifted") return NormPair::hm1_shifted;
  if (name == "x-hm1-shifted") return NormPair::x_hm1_shifted;
  throw std::invalid_argument(fmt::format("unknown norm pair '{}'", name));
}

SigmaMinResult resolvent_norm_at(const RadialGrid& g, const FlowParams& p, int k, double s,
                                 NormPair pair, const SigmaMinOptions& opt,
                                 const Eigen::VectorXcd* warm_start) {
  const BandedComplexOperator gop = build_pair_operator(g, p, k, s, pair, opt.c2);
  if (is_dual_pair(pair)) {
    return sigma_min_dual(g, gop, std::abs(p.beta(k)), opt, warm_start);
  }
  return sigma_min_euclidean(gop, opt, warm_start);
}

ScanResult pseudospectral_bound(const RadialGrid& g, const FlowParams& p, int k,
                                const ScanOptions& opt) {
  ScanResult result;
  result.k = k;
  result.B = p.B();
  result.pair = opt.pair;

  const double beta = p.beta(k);
  const double beta_abs = std::abs(beta);
  std::vector<double> shifts;
  shifts.push_back(0.0);
  if (beta_abs > 0.0) {
    // Log-clustered coverage of both signs out to a multiple of |kB|.
    const double u_hi = std::log10(opt.s_max_multiple);
    const double u_lo = -6.0;
    for (int i = 0; i < opt.coarse_points; ++i) {
      const double u = u_lo + (u_hi - u_lo) * i / (opt.coarse_points - 1.0);
      const double s = beta_abs * std::pow(10.0, u);
      shifts.push_back(s);
      shifts.push_back(-s);
    }
  } else {
    const double s_max = 10.0;
    for (int i = 0; i < 2 * opt.coarse_points + 1; ++i) {
      shifts.push_back(-s_max + 2.0 * s_max * i / (2.0 * opt.coarse_points));
    }
  }
  std::sort(shifts.begin(), shifts.end());
  shifts.erase(std::unique(shifts.begin(), shifts.end()), shifts.end());

  SigmaMinOptions sig = opt.sigma;
  Eigen::VectorXcd warm;
  // Unconverged evaluations far above the minimum are expected (the singular
  // values cluster there and inverse iteration stalls); only ones that could
  // affect the reported bound are flagged, so collect them with their values.
  std::vector<std::pair<double, double>> unconverged;
  auto eval = [&](double s, const Eigen::VectorXcd* ws) {
    ++result.sigma_evaluations;
    SigmaMinResult r = resolvent_norm_at(g, p, k, s, opt.pair, sig, ws);
    if (!r.converged) {
      unconverged.emplace_back(s, r.sigma);
    }
    return r;
  };

  std::vector<double> values(shifts.size());
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    const SigmaMinResult r = eval(shifts[i], warm.size() ? &warm : nullptr);
    values[i] = r.sigma;
    warm = r.vector;
  }
  result.shifts = shifts;
  result.sigma_min = values;

  const auto append_unconverged_flags = [&](double psi_value) {
    for (const auto& [s, sigma] : unconverged) {
      if (sigma <= 3.0 * psi_value) {
        result.flags.push_back(fmt::format("sigma-unconverged at shift {}", s));
      }
    }
  };

  const auto min_it = std::min_element(values.begin(), values.end());
  std::size_t best = static_cast<std::size_t>(min_it - values.begin());
  if (best == 0 || best + 1 == shifts.size()) {
    result.flags.push_back("edge-minimum");
    result.psi = values[best];
    result.psi_shift = shifts[best];
    append_unconverged_flags(result.psi);
    return result;
  }

  // Golden-section refinement of every coarse local minimum competitive with
  // the global one.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double global_sigma = values[best];
  double global_shift = shifts[best];

  for (std::size_t i = 1; i + 1 < shifts.size(); ++i) {
    if (!(values[i] <= values[i - 1] && values[i] <= values[i + 1])) continue;
    if (values[i] > 1.5 * values[best]) continue;
    double a = shifts[i - 1];
    double b = shifts[i + 1];
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    SigmaMinResult r1 = eval(x1, &warm);
    warm = r1.vector;
    SigmaMinResult r2 = eval(x2, &warm);
    warm = r2.vector;
    double f1 = r1.sigma, f2 = r2.sigma;
    int iter = 0;
    const double floor_width = beta_abs * 1e-9 + 1e-12;
    while (b - a > opt.rel_tol * std::max(std::abs(0.5 * (a + b)), floor_width) &&
           iter < opt.max_refine_iter) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        const SigmaMinResult r = eval(x1, &warm);
        warm = r.vector;
        f1 = r.sigma;
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        const SigmaMinResult r = eval(x2, &warm);
        warm = r.vector;
        f2 = r.sigma;
      }
      ++iter;
    }
    if (iter >= opt.max_refine_iter) {
      result.flags.push_back("unresolved-minimum");
    }
    const double s_best = f1 <= f2 ? x1 : x2;
    const double v_best = std::min(f1, f2);
    if (v_best < global_sigma) {
      global_sigma = v_best;
      global_shift = s_best;
    }
  }
  result.psi = global_sigma;
  result.psi_shift = global_shift;
  append_unconverged_flags(result.psi);
  std::sort(result.flags.begin(), result.flags.end());
  result.flags.erase(std::unique(result.flags.begin(), result.flags.end()),
                     result.flags.end());
  return result;
}

WitnessResult sharpness_witness(double r0, double r_max, int nodes_per_width) {
  if (!(r0 > 0.0) || r0 + 1.0 / r0 >= r_max) {
    throw std::invalid_argument("sharpness_witness: bump support must fit inside the grid");
  }
  WitnessResult res;
  res.r0 = r0;
  res.beta1 = std::pow(r0, 6.0);
  res.lambda = 1.0 / (r0 * r0);
  // Resolve the bump width 1/r0 with a fixed number of nodes.
  const int n = static_cast<int>(std::ceil(nodes_per_width * r0 * r_max));
  res.n = n;
  const RadialGrid g = build_grid(n, r_max);
  const FlowParams p = FlowParams::from_B(res.beta1);
  const double s = res.beta1 * res.lambda;

  const double lo = r0;
  const double hi = r0 + 1.0 / r0;
  GridFunction w = GridFunction::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r[j];
    if (r > lo && r < hi) {
      w[j] = (r - lo) * (hi - r);
    }
  }
  res.norm_l2 = norm(g, w, NormKind::L2);
  res.norm_l2_exact = std::pow(r0, -2.5) / std::sqrt(30.0);

  // Closed-form application on the support: the bump has second derivative
  // -2 there, and the boundary kinks are not sampled by interior nodes.
  GridFunction f_analytic = GridFunction::Zero(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r[j];
    if (r > lo && r < hi) {
      const double r2 = r * r;
      const double potential = 0.75 / r2 + r2 / 16.0 - 0.5;
      f_analytic[j] = std::complex<double>(2.0, 0.0) +
                      std::complex<double>(potential, res.beta1 * (1.0 / r2 - res.lambda)) *
                          std::complex<double>(w[j].real(), 0.0);
    }
  }
  res.ratio_analytic = norm(g, f_analytic, NormKind::L2) / res.norm_l2;
  res.c_witness = res.ratio_analytic / std::cbrt(res.beta1);

  const BandedComplexOperator op = resolvent_matrix(assemble_Lk(g, p, 1), s);
  res.ratio_matrix = norm(g, op.apply(w), NormKind::L2) / res.norm_l2;
  return res;
}

ShiftedAuditResult shifted_resolvent_audit(const RadialGrid& g, const FlowParams& p, int k,
                                           double c2, int n_samples, std::uint64_t seed) {
  ShiftedAuditResult res;
  res.c2 = c2;
  res.samples = n_samples;
  const double beta = p.beta(k);
  const double mu = std::cbrt(std::abs(beta));
  const DualNormSolver dual(g);
  Rng rng(seed);
  const BandedComplexOperator base = k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
  const int n = g.n();
  for (int sample = 0; sample < n_samples; ++sample) {
    const GridFunction w = random_test_function(g, rng.next());
    const double s = beta * rng.uniform();
    BandedComplexOperator op = shifted_matrix(resolvent_matrix(base, s), c2 * mu);
    const GridFunction f = op.apply(w);

    const double num_l2 = dual.h1_norm(w) + std::sqrt(mu) * norm(g, w, NormKind::L2);
    const double den_l2 = dual.dual_norm(f);
    if (den_l2 > 0.0) {
      res.max_constant_l2 = std::max(res.max_constant_l2, num_l2 / den_l2);
    }

    GridFunction u(n), fu(n);
    for (int j = 0; j < n; ++j) {
      u[j] = w[j] / g.r[j];
      fu[j] = f[j] / g.r[j];
    }
    const double num_x = dual.h1_norm(u) + std::sqrt(mu) * norm(g, u, NormKind::L2);
    const double den_x = dual.dual_norm(fu);
    if (den_x > 0.0) {
      res.max_constant_x = std::max(res.max_constant_x, num_x / den_x);
    }
  }
  return res;
}

double calibrate_c2(const RadialGrid& g, const FlowParams& p, int k, double cap,
                    double c2_hi, int n_samples, std::uint64_t seed) {
  auto constant_at = [&](double c2) {
    const ShiftedAuditResult a = shifted_resolvent_audit(g, p, k, c2, n_samples, seed);
    return std::max(a.max_constant_l2, a.max_constant_x);
  };
  if (constant_at(0.0) > cap) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = c2_hi;
  if (constant_at(hi) <= cap) {
    return hi;
  }
  for (int it = 0; it < 20; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (constant_at(mid) <= cap) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace couette
