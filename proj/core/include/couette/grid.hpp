#pragma once

#include <Eigen/Core>
#include <complex>

namespace couette {

// Grid functions are complex nodal values on a RadialGrid.
using GridFunction = Eigen::VectorXcd;

enum class GridScheme { uniform, stretched };

// Norms measurable on a grid function:
//   L2   plain quadrature norm
//   X    1/r-weighted norm, (sum q |f|^2 / r^2)^{1/2}
//   H1   Dirichlet form norm, (||f||^2 + ||f'||^2)^{1/2} through the assembled form
//   Hm1  dual of H1 against the quadrature pairing
//   M    Gaussian-growth norm, (sum q r e^{r^2/4} |f|^2)^{1/2}
enum class NormKind { L2, X, H1, Hm1, M };

// Open-ended radial mesh on (0, r_max): first node at half spacing from the
// origin, last node at half spacing below r_max, so both Dirichlet endpoints
// sit between a node and its reflection ghost.
struct RadialGrid {
  Eigen::ArrayXd r;  // nodes, strictly increasing
  Eigen::ArrayXd q;  // quadrature weights (midpoint cells)
  double r_max = 0.0;
  GridScheme scheme = GridScheme::uniform;

  int n() const { return static_cast<int>(r.size()); }
  // Cell width of a uniform grid; throws for stretched grids.
  double spacing() const;
};

RadialGrid build_grid(int n, double r_max, GridScheme scheme = GridScheme::uniform);

// End-row closure for the derivative stencils. Dirichlet rows eliminate
// odd-reflection ghosts (value zero at r = 0 and r = r_max); one_sided rows
// fall back to interior-only stencils for functions with nonzero boundary
// values (outer stream-function tails, for example).
enum class EndRows { dirichlet, one_sided };

// Three-point derivative of order 1 or 2, second order accurate in the
// interior on smoothly varying meshes.
GridFunction differentiate(const RadialGrid& g, const GridFunction& f, int order,
                           EndRows ends = EndRows::dirichlet);

// Tridiagonal rows of the same stencils, for assembling banded operators.
// lower[0] and upper[n-1] are zero.
struct StencilRows {
  Eigen::ArrayXd lower;
  Eigen::ArrayXd center;
  Eigen::ArrayXd upper;
};
StencilRows derivative_rows(const RadialGrid& g, int order, EndRows ends);

double norm(const RadialGrid& g, const GridFunction& f, NormKind kind);

// Quadrature pairing sum_i q_i a_i conj(b_i), linear in the first argument.
std::complex<double> inner(const RadialGrid& g, const GridFunction& a, const GridFunction& b);

// Tridiagonal SPD matrix of the discrete Dirichlet H1 form (mass plus
// staggered-difference stiffness with half cells at both walls).
struct H1Form {
  Eigen::ArrayXd diag;
  Eigen::ArrayXd sub;  // size n-1
};
H1Form h1_form(const RadialGrid& g);

// Evaluates H1 and dual norms against a factorized H1 form. The dual norm is
// ||S^{-1/2} M f|| with M = diag(q), which makes |<f, v>| <= ||f||_dual ||v||_H1
// an equality at v = S^{-1} M f.
class DualNormSolver {
 public:
  explicit DualNormSolver(const RadialGrid& g);
  double h1_norm(const GridFunction& f) const;
  double dual_norm(const GridFunction& f) const;
  // Solves S x = b with the factorized form (used by resolvent scans).
  Eigen::VectorXcd apply_inverse(const Eigen::VectorXcd& b) const;
  Eigen::VectorXcd apply_form(const Eigen::VectorXcd& x) const;  // S x
  const RadialGrid& grid() const { return *grid_; }

 private:
  const RadialGrid* grid_;
  H1Form form_;
  Eigen::ArrayXd fac_d_;  // LDL^T factors of the tridiagonal form
  Eigen::ArrayXd fac_e_;
};

}  // namespace couette
