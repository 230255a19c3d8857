#pragma once

#include "respfit/common.hpp"
#include "respfit/estimation/legendre.hpp"
#include "respfit/estimation/space.hpp"

#include <vector>

namespace respfit::estimation {

// Least-squares Legendre expansion of each residual component over the
// parameter box: f_i(theta) ~ sum_a coeff(a,i) p_a(map(theta)).
class SurrogateModel {
 public:
  SurrogateModel(LegendreBasis basis, BoxMap box, Matrix coefficients,
                 double fit_residual_rms, Matrix grid_points, Matrix grid_values);

  Index n_residuals() const { return coefficients_.cols(); }
  const BoxMap& box() const { return box_; }
  const LegendreBasis& basis() const { return basis_; }
  const Matrix& coefficients() const { return coefficients_; }
  double fit_residual_rms() const { return fit_residual_rms_; }
  const Matrix& grid_points() const { return grid_points_; }
  const Matrix& grid_values() const { return grid_values_; }

  // Residual vector f(theta) and optionally its Jacobian d f / d theta.
  Vector residuals(const Eigen::Ref<const Vector>& theta, Matrix* jacobian = nullptr) const;
  double cost(const Eigen::Ref<const Vector>& theta) const {
    return residuals(theta).squaredNorm();
  }

 private:
  LegendreBasis basis_;
  BoxMap box_;
  Matrix coefficients_;  // n_basis x n_residuals
  double fit_residual_rms_;
  Matrix grid_points_;   // evaluated grid, for diagnostics
  Matrix grid_values_;
};

// Fits the surrogate on precomputed residuals over grid points inside the
// box. Rows of `grid` are parameter points; rows of `residual_matrix` the
// corresponding residual vectors. Grid points flagged invalid (simulation
// blow-up, infeasible) are excluded. The least-squares system must stay
// overdetermined; a rank-deficient design matrix is an error.
SurrogateModel build_surrogate(const ParameterSpace& space, const Matrix& grid,
                               const Matrix& residual_matrix,
                               const std::vector<char>& valid, int order);

}  // namespace respfit::estimation
