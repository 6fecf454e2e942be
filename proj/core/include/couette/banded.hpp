#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

namespace couette {

// Complex banded matrix in LAPACK general-band layout, with kl extra leading
// rows reserved for LU fill so factorization never reshapes the storage.
// Entry (i, j) lives at bands(kl + ku + i - j, j) for |i - j| within the band.
struct BandedComplexOperator {
  int n = 0;
  int kl = 0;
  int ku = 0;
  int k = 0;                // angular wavenumber the operator was assembled for
  double shift_real = 0.0;  // accumulated real multiple of identity subtracted
  double shift_imag = 0.0;  // accumulated imaginary multiple subtracted
  Eigen::MatrixXcd bands;   // (2*kl + ku + 1) x n

  static BandedComplexOperator zeros(int n, int kl, int ku);

  bool in_band(int i, int j) const {
    return i >= 0 && j >= 0 && i < n && j < n && i - j <= kl && j - i <= ku;
  }
  std::complex<double>& at(int i, int j) { return bands(kl + ku + i - j, j); }
  std::complex<double> get(int i, int j) const {
    return in_band(i, j) ? bands(kl + ku + i - j, j) : std::complex<double>(0.0);
  }
  void add_to_diagonal(std::complex<double> z);

  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
  Eigen::VectorXcd apply_adjoint(const Eigen::VectorXcd& x) const;
  Eigen::MatrixXcd dense() const;
};

// Partial-pivoting LU of a banded complex matrix. Solves with the matrix and
// with its conjugate transpose, both in place or by value.
class BandedLU {
 public:
  BandedLU() = default;
  explicit BandedLU(const BandedComplexOperator& a);

  void solve_in_place(Eigen::VectorXcd& b) const;
  void solve_adjoint_in_place(Eigen::VectorXcd& b) const;
  Eigen::VectorXcd solve(Eigen::VectorXcd b) const;
  Eigen::VectorXcd solve_adjoint(Eigen::VectorXcd b) const;

  bool factorized() const { return info_ == 0; }
  int info() const { return info_; }

 private:
  int n_ = 0, kl_ = 0, ku_ = 0;
  int info_ = -1;
  Eigen::MatrixXcd lu_;
  std::vector<int> ipiv_;
};

}  // namespace couette
