#include "respfit/estimation/surrogate.hpp"

#include <Eigen/QR>

#include <cmath>
#include <sstream>

namespace respfit::estimation {

Matrix DampingMatrix::dense() const {
  Matrix g = Matrix::Zero(n_b, n_b);
  for (Index i = 0; i < n_b; ++i) {
    g(i, i) = g0;
    g(i, (i + 1) % n_b) = g1;
    g(i, (i + n_b - 1) % n_b) = g1;
    if (n_b > 4) {
      g(i, (i + 2) % n_b) = g2;
      g(i, (i + n_b - 2) % n_b) = g2;
    }
  }
  return g;
}

SurrogateModel::SurrogateModel(LegendreBasis basis, BoxMap box, Matrix coefficients,
                               double fit_residual_rms, Matrix grid_points,
                               Matrix grid_values)
    : basis_(std::move(basis)), box_(std::move(box)), coefficients_(std::move(coefficients)),
      fit_residual_rms_(fit_residual_rms), grid_points_(std::move(grid_points)),
      grid_values_(std::move(grid_values)) {}

Vector SurrogateModel::residuals(const Eigen::Ref<const Vector>& theta,
                                 Matrix* jacobian) const {
  const Vector z = box_.to_unit(theta);
  if (!jacobian) return coefficients_.transpose() * basis_.evaluate(z);
  Vector vals;
  Matrix basis_jac;
  basis_.evaluate_with_jacobian(z, vals, basis_jac);
  // Chain rule through the affine box map.
  *jacobian = coefficients_.transpose() * basis_jac * box_.unit_scale().asDiagonal();
  return coefficients_.transpose() * vals;
}

SurrogateModel build_surrogate(const ParameterSpace& space, const Matrix& grid,
                               const Matrix& residual_matrix,
                               const std::vector<char>& valid, int order) {
  const Index n_grid = grid.rows();
  if (residual_matrix.rows() != n_grid)
    throw NumericalError("build_surrogate: grid/residual row mismatch");
  LegendreBasis basis(static_cast<int>(space.dim()), order);
  BoxMap box{space.lo, space.hi};

  Index n_ok = 0;
  for (Index g = 0; g < n_grid; ++g)
    if (valid.empty() || valid[static_cast<std::size_t>(g)]) ++n_ok;
  if (n_ok < basis.size()) {
    std::ostringstream msg;
    msg << "build_surrogate: " << n_ok << " usable grid points for " << basis.size()
        << " coefficients";
    throw NumericalError(msg.str());
  }

  Matrix design(n_ok, basis.size());
  Matrix rhs(n_ok, residual_matrix.cols());
  Matrix kept_points(n_ok, grid.cols());
  Index r = 0;
  for (Index g = 0; g < n_grid; ++g) {
    if (!valid.empty() && !valid[static_cast<std::size_t>(g)]) continue;
    design.row(r) = basis.evaluate(box.to_unit(grid.row(g).transpose()));
    rhs.row(r) = residual_matrix.row(g);
    kept_points.row(r) = grid.row(g);
    ++r;
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  if (qr.rank() < basis.size())
    throw NumericalError("build_surrogate: rank-deficient design matrix");
  Matrix coeffs = qr.solve(rhs);
  const double rms = std::sqrt((design * coeffs - rhs).squaredNorm() /
                               double(n_ok * residual_matrix.cols()));
  return SurrogateModel(std::move(basis), std::move(box), std::move(coeffs), rms,
                        std::move(kept_points), std::move(rhs));
}

}  // namespace respfit::estimation
