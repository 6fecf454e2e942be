#include "couette/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "couette/rng.hpp"

namespace couette::oracle {

namespace {

constexpr double kGlNodes[4] = {
    0.1834346424956498049394761,
    0.5255324099163289858177390,
    0.7966664774136267395915539,
    0.9602898564975362316835609,
};
constexpr double kGlWeights[4] = {
    0.3626837833783619829651504,
    0.3137066458778872873379622,
    0.2223810344533744705443560,
    0.1012285362903762591525314,
};

template <typename Scalar, typename F>
Scalar gl8_segment(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Scalar acc{};
  for (int i = 0; i < 4; ++i) {
    const double dx = half * kGlNodes[i];
    acc += Scalar(kGlWeights[i] * (f(mid - dx) + f(mid + dx)));
  }
  return acc * half;
}

template <typename Scalar, typename F>
Scalar gl8_composite(const F& f, double a, double b, int panels) {
  if (panels < 1) {
    throw std::invalid_argument("integrate: need at least one panel");
  }
  Scalar acc{};
  for (int p = 0; p < panels; ++p) {
    const double x0 = a + (b - a) * p / panels;
    const double x1 = a + (b - a) * (p + 1) / panels;
    acc += gl8_segment<Scalar>(f, x0, x1);
  }
  return acc;
}

// Gaussian bump sums with analytic derivatives, used as smooth test fields.
struct BumpSum {
  struct Bump {
    double amp_re = 0.0;
    double amp_im = 0.0;
    double center = 0.0;
    double width = 1.0;
  };
  std::vector<Bump> bumps;

  std::complex<double> value(double r) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& b : bumps) {
      const double t = (r - b.center) / b.width;
      const double e = std::exp(-t * t);
      acc += std::complex<double>(b.amp_re * e, b.amp_im * e);
    }
    return acc;
  }
  std::complex<double> deriv(double r) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& b : bumps) {
      const double t = (r - b.center) / b.width;
      const double e = -2.0 * t / b.width * std::exp(-t * t);
      acc += std::complex<double>(b.amp_re * e, b.amp_im * e);
    }
    return acc;
  }
  std::complex<double> deriv2(double r) const {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& b : bumps) {
      const double t = (r - b.center) / b.width;
      const double e = (4.0 * t * t - 2.0) / (b.width * b.width) * std::exp(-t * t);
      acc += std::complex<double>(b.amp_re * e, b.amp_im * e);
    }
    return acc;
  }
};

BumpSum random_bumps(Rng& rng, double r_max, bool complex_amps) {
  BumpSum sum;
  const int count = 3 + static_cast<int>(rng.uniform_int(0, 5));
  for (int i = 0; i < count; ++i) {
    BumpSum::Bump b;
    b.width = rng.uniform(0.3, 1.0);
    b.center = rng.uniform(4.0 * b.width, r_max / 2.0);
    b.amp_re = rng.uniform(-1.0, 1.0);
    b.amp_im = complex_amps ? rng.uniform(-1.0, 1.0) : 0.0;
    sum.bumps.push_back(b);
  }
  return sum;
}

// Five-point first derivative on a uniform grid, one-sided at the edges.
Eigen::ArrayXd fd1_uniform(const Eigen::ArrayXd& f, double h) {
  const int n = static_cast<int>(f.size());
  Eigen::ArrayXd out(n);
  if (n < 5) {
    throw std::invalid_argument("fd1_uniform: need at least five nodes");
  }
  for (int j = 2; j < n - 2; ++j) {
    out[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
  }
  out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
  out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
                f[n - 5]) /
               (12.0 * h);
  out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
                3.0 * f[n - 5]) /
               (12.0 * h);
  return out;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, int panels) {
  return gl8_composite<double>(f, a, b, panels);
}

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b, int panels) {
  return gl8_composite<std::complex<double>>(f, a, b, panels);
}

double dense_sigma_min(const RadialGrid& g, const FlowParams& p, int k, double s,
                       NormPair pair, double c2) {
  const int n = g.n();
  if (n > 1024) {
    throw std::invalid_argument("dense_sigma_min: dense reference limited to n <= 1024");
  }
  BandedComplexOperator op = k == 0 ? assemble_zero_mode(g, p) : assemble_Lk(g, p, k);
  op = resolvent_matrix(op, s);
  const double beta_abs = std::abs(p.beta(k));

  const bool dual = pair == NormPair::hm1_shifted || pair == NormPair::x_hm1_shifted;
  const bool x_weighted = pair == NormPair::x_to_x || pair == NormPair::x_hm1_shifted;

  if (!dual) {
    Eigen::MatrixXcd a = op.dense();
    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) {
      d[j] = std::sqrt(g.q[j]);
      if (x_weighted) d[j] /= g.r[j];
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) *= d[i] / d[j];
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues().minCoeff();
  }

  const double mu = std::cbrt(beta_abs);
  op = shifted_matrix(op, c2 * mu);
  Eigen::MatrixXcd a = op.dense();
  if (x_weighted) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        a(i, j) *= g.r[j] / g.r[i];
      }
    }
  }

  const H1Form form = h1_form(g);
  Eigen::MatrixXcd s_dense = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    s_dense(j, j) = form.diag[j];
    if (j + 1 < n) {
      s_dense(j, j + 1) = form.sub[j];
      s_dense(j + 1, j) = form.sub[j];
    }
  }
  Eigen::MatrixXcd mg = a;
  for (int i = 0; i < n; ++i) mg.row(i) *= g.q[i];
  const Eigen::MatrixXcd sinv_mg = Eigen::LDLT<Eigen::MatrixXcd>(s_dense).solve(mg);
  Eigen::MatrixXcd quad = mg.adjoint() * sinv_mg;
  quad = 0.5 * (quad + Eigen::MatrixXcd(quad.adjoint()));

  Eigen::MatrixXcd h_hat = s_dense;
  for (int j = 0; j < n; ++j) h_hat(j, j) += mu * g.q[j];

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ges(quad, h_hat,
                                                                 Eigen::EigenvaluesOnly);
  if (ges.info() != Eigen::Success) {
    throw std::runtime_error("dense_sigma_min: generalized eigensolver failed");
  }
  return std::sqrt(std::max(ges.eigenvalues().minCoeff(), 0.0));
}

namespace {

GridFunction greens_kernel(const RadialGrid& g, int k,
                           const std::function<std::complex<double>(double)>& rho) {
  const int n = g.n();
  const double a = std::abs(k);
  if (a < 1.0) {
    throw std::invalid_argument("greens_stream: wavenumber must be nonzero");
  }
  const auto u1_rho = [&](double s) { return std::pow(s, 0.5 + a) * rho(s); };
  const auto u2_rho = [&](double s) { return std::pow(s, 0.5 - a) * rho(s); };

  // Segment boundaries: the axis, every node, and the outer wall.
  std::vector<double> edges;
  edges.reserve(n + 2);
  edges.push_back(0.0);
  for (int j = 0; j < n; ++j) edges.push_back(g.r[j]);
  edges.push_back(g.r_max);

  // Inner integrals accumulate from the axis; the first segment only feeds
  // the regular branch, which is integrable there for every wavenumber.
  Eigen::VectorXcd inner_prefix(n);
  inner_prefix[0] = gl8_segment<std::complex<double>>(u1_rho, edges[0], edges[1]);
  for (int j = 1; j < n; ++j) {
    inner_prefix[j] =
        inner_prefix[j - 1] + gl8_segment<std::complex<double>>(u1_rho, edges[j], edges[j + 1]);
  }
  // Outer integrals accumulate from the wall down to each node.
  Eigen::VectorXcd outer_suffix(n);
  std::complex<double> acc(0.0, 0.0);
  acc += gl8_segment<std::complex<double>>(u2_rho, g.r[n - 1], g.r_max);
  outer_suffix[n - 1] = acc;
  for (int j = n - 2; j >= 0; --j) {
    acc += gl8_segment<std::complex<double>>(u2_rho, g.r[j], g.r[j + 1]);
    outer_suffix[j] = acc;
  }

  GridFunction phi(n);
  for (int j = 0; j < n; ++j) {
    const double r = g.r[j];
    const std::complex<double> inner = inner_prefix[j];
    phi[j] = -(std::pow(r, 0.5 - a) * inner + std::pow(r, 0.5 + a) * outer_suffix[j]) /
             (2.0 * a);
  }
  return phi;
}

}  // namespace

GridFunction greens_stream(const RadialGrid& g, int k,
                           const std::function<std::complex<double>(double)>& w) {
  const auto rho = [&](double s) { return std::exp(-s * s / 8.0) * w(s); };
  return greens_kernel(g, k, rho);
}

GridFunction greens_stream_nodal(const RadialGrid& g, int k, const GridFunction& w) {
  const int n = g.n();
  const auto interp = [&](double s) -> std::complex<double> {
    if (s <= 0.0 || s >= g.r_max) return {0.0, 0.0};
    const double* begin = g.r.data();
    const double* end = begin + n;
    const double* it = std::upper_bound(begin, end, s);
    if (it == begin) {
      // Between the axis and the first node: interpolate from zero.
      return w[0] * (s / g.r[0]);
    }
    if (it == end) {
      // Between the last node and the wall: interpolate to zero.
      const double t = (g.r_max - s) / (g.r_max - g.r[n - 1]);
      return w[n - 1] * t;
    }
    const int j = static_cast<int>(it - begin);
    const double t = (s - g.r[j - 1]) / (g.r[j] - g.r[j - 1]);
    return w[j - 1] * (1.0 - t) + w[j] * t;
  };
  const auto rho = [&](double s) { return std::exp(-s * s / 8.0) * interp(s); };
  return greens_kernel(g, k, rho);
}

namespace {

struct ChartState {
  bool in_a = true;   // chart A tracks (K, log|g/K|); chart B tracks (1/K, log|g|)
  double y0 = 0.0;    // K in chart A, J = 1/K in chart B
  double y1 = 0.0;    // log|g/K| in chart A, log|g| in chart B
  int sign = 1;       // sign of g/K in chart A, sign of g in chart B
};

}  // namespace

RiccatiSolution riccati_g(double a_coeff, double b_coeff, double r_lo, double r_hi, int n) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo) || n < 16) {
    throw std::invalid_argument("riccati_g: need 0 < r_lo < r_hi and n >= 16");
  }
  RiccatiSolution sol;
  sol.A = a_coeff;
  sol.B = b_coeff;
  const double c = a_coeff * a_coeff / 4.0 - a_coeff / 2.0 + b_coeff;

  // Slope field K(t) with t = log r: K' = 1 - K - c K^2. Start from the
  // attracting equilibrium when one exists, so lim r -> 0 picks out the
  // dominant power-law branch.
  double k0 = 1.0;
  const double disc = 1.0 + 4.0 * c;
  if (disc > 0.0 && c != 0.0) {
    k0 = (-1.0 + std::sqrt(disc)) / (2.0 * c);
  }
  if (k0 == 0.0) k0 = 1.0;

  ChartState st;
  if (std::abs(k0) <= 1.5) {
    st.in_a = true;
    st.y0 = k0;
    st.y1 = -std::log(std::abs(k0));
    st.sign = k0 > 0.0 ? 1 : -1;
  } else {
    st.in_a = false;
    st.y0 = 1.0 / k0;
    st.y1 = 0.0;
    st.sign = 1;
  }

  const auto deriv = [&](const ChartState& s, double* d0, double* d1) {
    if (s.in_a) {
      const double k = s.y0;
      *d0 = 1.0 - k - c * k * k;
      *d1 = c * k + 1.0 - a_coeff / 2.0;
    } else {
      const double j = s.y0;
      *d0 = c + j - j * j;
      *d1 = j - a_coeff / 2.0;
    }
  };
  const auto rk4 = [&](ChartState s, double h) {
    double a0, a1, b0, b1, c0, c1, d0, d1;
    deriv(s, &a0, &a1);
    ChartState t = s;
    t.y0 = s.y0 + 0.5 * h * a0;
    t.y1 = s.y1 + 0.5 * h * a1;
    deriv(t, &b0, &b1);
    t.y0 = s.y0 + 0.5 * h * b0;
    t.y1 = s.y1 + 0.5 * h * b1;
    deriv(t, &c0, &c1);
    t.y0 = s.y0 + h * c0;
    t.y1 = s.y1 + h * c1;
    deriv(t, &d0, &d1);
    s.y0 += h / 6.0 * (a0 + 2.0 * b0 + 2.0 * c0 + d0);
    s.y1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1);
    return s;
  };

  const double t_lo = std::log(r_lo);
  const double t_hi = std::log(r_hi);
  const double dt_out = (t_hi - t_lo) / (n - 1);
  const int substeps = 4;
  const double h = dt_out / substeps;

  sol.r.resize(n);
  sol.g.resize(n);
  sol.dg.resize(n);

  const auto record = [&](int i, double t) {
    const double r = std::exp(t);
    sol.r[i] = r;
    if (st.in_a) {
      const double k = st.y0;
      const double g_over_k = st.sign * std::exp(st.y1);
      sol.g[i] = g_over_k * k;
      sol.dg[i] = (g_over_k - a_coeff * sol.g[i] / 2.0) / r;
    } else {
      const double j = st.y0;
      const double g = st.sign * std::exp(st.y1);
      sol.g[i] = g;
      sol.dg[i] = g * (j - a_coeff / 2.0) / r;
    }
  };

  record(0, t_lo);
  for (int i = 1; i < n; ++i) {
    for (int ss = 0; ss < substeps; ++ss) {
      const double t_before = t_lo + dt_out * (i - 1) + h * ss;
      const ChartState prev = st;
      st = rk4(st, h);
      if (st.in_a) {
        if (prev.y0 != 0.0 && st.y0 != 0.0 && (prev.y0 > 0.0) != (st.y0 > 0.0)) {
          const double frac = prev.y0 / (prev.y0 - st.y0);
          sol.zero_crossings.push_back(std::exp(t_before + frac * h));
        } else if (st.y0 == 0.0) {
          sol.zero_crossings.push_back(std::exp(t_before + h));
        }
        if (std::abs(st.y0) > 1.5) {
          ChartState next;
          next.in_a = false;
          next.y0 = 1.0 / st.y0;
          next.y1 = st.y1 + std::log(std::abs(st.y0));
          next.sign = st.sign * (st.y0 > 0.0 ? 1 : -1);
          st = next;
        }
      } else {
        if (std::abs(st.y0) > 4.0 / 3.0) {
          ChartState next;
          next.in_a = true;
          next.y0 = 1.0 / st.y0;
          next.y1 = st.y1 - std::log(std::abs(next.y0));
          next.sign = st.sign * (next.y0 > 0.0 ? 1 : -1);
          st = next;
        }
      }
    }
    record(i, t_lo + dt_out * i);
  }
  sol.positive = sol.zero_crossings.empty();

  // Residuals: dg is analytic per node, the second derivative comes from a
  // five-point difference of dg on the log grid, so the floor is set by
  // first-derivative roundoff rather than h^-2 amplification.
  const Eigen::ArrayXd ddg_dt = fd1_uniform(sol.dg, dt_out);
  const Eigen::ArrayXd gs = sol.r * sol.dg;
  const Eigen::ArrayXd gss_dt = fd1_uniform(gs, dt_out);

  const int window = std::max(8, n / 64);
  double worst = 0.0;
  double worst_linear = 0.0;
  double global_amp = sol.g.abs().maxCoeff();
  for (int j = 2; j < n - 2; ++j) {
    const int w_lo = std::max(0, j - window);
    const int w_hi = std::min(n - 1, j + window);
    double local_amp = 0.0;
    for (int i = w_lo; i <= w_hi; ++i) local_amp = std::max(local_amp, std::abs(sol.g[i]));
    if (std::abs(sol.g[j]) < 1e-3 * local_amp) continue;

    const double r = sol.r[j];
    const double g2 = ddg_dt[j] / r;  // d(dg)/dr
    const double term_a = r * r * g2;
    const double term_b = a_coeff * r * sol.dg[j];
    const double term_c = b_coeff * sol.g[j];
    const double scale = std::abs(term_a) + std::abs(term_b) + std::abs(term_c) +
                         1e-300 * global_amp;
    worst = std::max(worst, std::abs(term_a + term_b - term_c) / scale);

    const double lin_a = gss_dt[j];
    const double lin_b = (a_coeff - 1.0) * gs[j];
    const double lin_c = b_coeff * sol.g[j];
    const double lscale = std::abs(lin_a) + std::abs(lin_b) + std::abs(lin_c) +
                          1e-300 * global_amp;
    worst_linear = std::max(worst_linear, std::abs(lin_a + lin_b - lin_c) / lscale);
  }
  sol.residual = worst;
  sol.residual_linear = worst_linear;
  return sol;
}

InterpolationReport interpolation_checks(int n_samples, std::uint64_t seed) {
  InterpolationReport rep;
  rep.samples = n_samples;
  const int n = 4096;
  const double r_max = 20.0;
  const double h = r_max / n;
  Eigen::ArrayXd r(n);
  for (int j = 0; j < n; ++j) r[j] = (j + 0.5) * h;

  rep.alphas = {1.0, 1.5, 2.0};
  rep.weighted_constants.assign(rep.alphas.size(), 0.0);

  Rng rng(seed);
  for (int sample = 0; sample < n_samples; ++sample) {
    const BumpSum w = random_bumps(rng, r_max, false);
    double sup = 0.0, nrm2 = 0.0, dnrm2 = 0.0;
    Eigen::ArrayXd wv(n), dwv(n);
    for (int j = 0; j < n; ++j) {
      wv[j] = w.value(r[j]).real();
      dwv[j] = w.deriv(r[j]).real();
      sup = std::max(sup, std::abs(wv[j]));
      nrm2 += h * wv[j] * wv[j];
      dnrm2 += h * dwv[j] * dwv[j];
    }
    const double den = 2.0 * std::sqrt(nrm2) * std::sqrt(dnrm2);
    if (den > 0.0) {
      rep.max_ratio = std::max(rep.max_ratio, sup * sup / den);
    }

    for (std::size_t ai = 0; ai < rep.alphas.size(); ++ai) {
      const double alpha = rep.alphas[ai];
      double sup_w = 0.0, low2 = 0.0, dlow2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double ra = std::pow(r[j], alpha);
        sup_w = std::max(sup_w, std::abs(wv[j]) / ra);
        const double low = wv[j] / (ra * std::sqrt(r[j]));
        low2 += h * low * low;
        const double dlow = dwv[j] * std::sqrt(r[j]) / ra;
        dlow2 += h * dlow * dlow;
      }
      const double den_w =
          2.0 * (std::sqrt(low2) * std::sqrt(dlow2) + alpha * low2);
      if (den_w > 0.0) {
        rep.weighted_constants[ai] =
            std::max(rep.weighted_constants[ai], sup_w * sup_w / den_w);
      }
    }
  }

  // Image-charge exponentials approach the boundary-value constant as the
  // peak moves away from the wall.
  for (const double a : {1.0, 2.0, 4.0, 8.0}) {
    double sup = 0.0, nrm2 = 0.0, dnrm2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = r[j];
      const double v = std::exp(-std::abs(x - a)) - std::exp(-(x + a));
      const double dv = (x < a ? 1.0 : -1.0) * std::exp(-std::abs(x - a)) +
                        std::exp(-(x + a));
      sup = std::max(sup, std::abs(v));
      nrm2 += h * v * v;
      dnrm2 += h * dv * dv;
    }
    const double den = 2.0 * std::sqrt(nrm2) * std::sqrt(dnrm2);
    rep.extremal_ratio = std::max(rep.extremal_ratio, sup * sup / den);
  }
  return rep;
}

FactorizationReport factorization_identities(int k, int n, double r_max,
                                             std::uint64_t seed) {
  if (k == 0) {
    throw std::invalid_argument("factorization_identities: wavenumber must be nonzero");
  }
  if (n < 64) {
    throw std::invalid_argument("factorization_identities: need n >= 64");
  }
  FactorizationReport rep;
  rep.k = k;
  rep.n = n;
  const double ak = std::abs(k);
  const double h = r_max / n;
  Eigen::ArrayXd r(n);
  for (int j = 0; j < n; ++j) r[j] = (j + 0.5) * h;

  // Ground-state profile of the wavenumber: r^{|k| + 1/2} e^{-r^2/8}. Its
  // second derivative reproduces the potential up to the spectral offset.
  Eigen::ArrayXd hk(n);
  double hk_max = 0.0;
  for (int j = 0; j < n; ++j) {
    hk[j] = std::pow(r[j], ak + 0.5) * std::exp(-r[j] * r[j] / 8.0);
    hk_max = std::max(hk_max, std::abs(hk[j]));
  }
  const Eigen::ArrayXd dhk = fd1_uniform(hk, h);
  const Eigen::ArrayXd ddhk = fd1_uniform(dhk, h);
  double worst = 0.0;
  for (int j = 4; j < n - 4; ++j) {
    const double r2 = r[j] * r[j];
    const double pot = (k * k - 0.25) / r2 + r2 / 16.0 - 0.5;
    const double applied = -ddhk[j] + pot * hk[j];
    worst = std::max(worst, std::abs(applied - 0.5 * ak * hk[j]) / hk_max);
  }
  rep.pointwise_residual = worst;

  // Quadratic identities on a random smooth complex field. All derivatives
  // are analytic; only the quadrature is discrete, so the residuals shrink at
  // the quadrature order under grid refinement.
  Rng rng(seed);
  const BumpSum w = random_bumps(rng, r_max, true);

  double lhs_q = 0.0, rhs_q = 0.0, lhs_w = 0.0, rhs_w = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = r[j];
    const double x2 = x * x;
    const std::complex<double> wv = w.value(x);
    const std::complex<double> dwv = w.deriv(x);
    const std::complex<double> ddwv = w.deriv2(x);
    const double pot = (k * k - 0.25) / x2 + x2 / 16.0 - 0.5;
    const std::complex<double> lw = -ddwv + pot * wv;

    // Factorization through the ground state of the same wavenumber.
    const double log_deriv_k = (ak + 0.5) / x - x / 4.0;
    const std::complex<double> dk_w = dwv - log_deriv_k * wv;
    lhs_q += h * (lw * std::conj(wv)).real();
    rhs_q += h * (std::norm(dk_w) + 0.5 * ak * std::norm(wv));

    // Weighted form through the |k| = 1 ground state.
    const double log_deriv_1 = 1.5 / x - x / 4.0;
    const std::complex<double> d1_w = dwv - log_deriv_1 * wv;
    lhs_w += h * (lw * std::conj(wv)).real() / x2;
    rhs_w += h * (std::norm(d1_w) / x2 +
                  (k * k - 1.0) * std::norm(wv) / (x2 * x2));
  }
  rep.quadratic_residual = std::abs(lhs_q - rhs_q) / (std::abs(lhs_q) + std::abs(rhs_q));
  rep.weighted_residual = std::abs(lhs_w - rhs_w) / (std::abs(lhs_w) + std::abs(rhs_w));
  return rep;
}

double gaussian_moment_cubed() {
  return integrate([](double r) { return r * r * r * std::exp(-r * r / 4.0); }, 0.0, 60.0,
                   256);
}

double gaussian_moment_first() {
  return integrate([](double r) { return r * std::exp(-r * r / 4.0); }, 0.0, 60.0, 256);
}

}  // namespace couette::oracle
