#include "couette/banded.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

static_assert(sizeof(lapack_int) == sizeof(int),
              "band solvers assume 32-bit LAPACK integers");

namespace couette {

BandedComplexOperator BandedComplexOperator::zeros(int n, int kl, int ku) {
  if (n <= 0 || kl < 0 || ku < 0) {
    throw std::invalid_argument(fmt::format("banded zeros: bad shape n={} kl={} ku={}", n, kl, ku));
  }
  BandedComplexOperator a;
  a.n = n;
  a.kl = kl;
  a.ku = ku;
  a.bands = Eigen::MatrixXcd::Zero(2 * kl + ku + 1, n);
  return a;
}

void BandedComplexOperator::add_to_diagonal(std::complex<double> z) {
  for (int j = 0; j < n; ++j) {
    bands(kl + ku, j) += z;
  }
}

Eigen::VectorXcd BandedComplexOperator::apply(const Eigen::VectorXcd& x) const {
  if (x.size() != n) {
    throw std::invalid_argument("banded apply: size mismatch");
  }
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const int i_lo = std::max(0, j - ku);
    const int i_hi = std::min(n - 1, j + kl);
    for (int i = i_lo; i <= i_hi; ++i) {
      y[i] += bands(kl + ku + i - j, j) * x[j];
    }
  }
  return y;
}

Eigen::VectorXcd BandedComplexOperator::apply_adjoint(const Eigen::VectorXcd& x) const {
  if (x.size() != n) {
    throw std::invalid_argument("banded apply_adjoint: size mismatch");
  }
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  for (int j = 0; j < n; ++j) {
    const int i_lo = std::max(0, j - ku);
    const int i_hi = std::min(n - 1, j + kl);
    std::complex<double> acc = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
      acc += std::conj(bands(kl + ku + i - j, j)) * x[i];
    }
    y[j] = acc;
  }
  return y;
}

Eigen::MatrixXcd BandedComplexOperator::dense() const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int i_lo = std::max(0, j - ku);
    const int i_hi = std::min(n - 1, j + kl);
    for (int i = i_lo; i <= i_hi; ++i) {
      a(i, j) = bands(kl + ku + i - j, j);
    }
  }
  return a;
}

BandedLU::BandedLU(const BandedComplexOperator& a)
    : n_(a.n), kl_(a.kl), ku_(a.ku), lu_(a.bands), ipiv_(a.n) {
  info_ = LAPACKE_zgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, lu_.data(),
                         static_cast<int>(lu_.rows()), ipiv_.data());
  if (info_ < 0) {
    throw std::invalid_argument(fmt::format("band LU: illegal argument {}", -info_));
  }
}

void BandedLU::solve_in_place(Eigen::VectorXcd& b) const {
  if (info_ != 0) {
    throw std::runtime_error(fmt::format("band LU solve: matrix is singular (info={})", info_));
  }
  if (b.size() != n_) {
    throw std::invalid_argument("band LU solve: size mismatch");
  }
  const auto info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, 1, lu_.data(),
                                   static_cast<int>(lu_.rows()), ipiv_.data(), b.data(), n_);
  if (info != 0) {
    throw std::runtime_error(fmt::format("band LU solve failed, info={}", info));
  }
}

void BandedLU::solve_adjoint_in_place(Eigen::VectorXcd& b) const {
  if (info_ != 0) {
    throw std::runtime_error(fmt::format("band LU solve: matrix is singular (info={})", info_));
  }
  if (b.size() != n_) {
    throw std::invalid_argument("band LU solve: size mismatch");
  }
  const auto info = LAPACKE_zgbtrs(LAPACK_COL_MAJOR, 'C', n_, kl_, ku_, 1, lu_.data(),
                                   static_cast<int>(lu_.rows()), ipiv_.data(), b.data(), n_);
  if (info != 0) {
    throw std::runtime_error(fmt::format("band LU adjoint solve failed, info={}", info));
  }
}

Eigen::VectorXcd BandedLU::solve(Eigen::VectorXcd b) const {
  solve_in_place(b);
  return b;
}

Eigen::VectorXcd BandedLU::solve_adjoint(Eigen::VectorXcd b) const {
  solve_adjoint_in_place(b);
  return b;
}

}  // namespace couette
