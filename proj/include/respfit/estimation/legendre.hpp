#pragma once

#include "respfit/common.hpp"

#include <vector>

namespace respfit::estimation {

// Legendre polynomial P_n on [-1,1], normalized so that
// E_{U[-1,1]}[p_n p_m] = delta_{nm}, i.e. p_n = sqrt(2n+1) P_n.
double legendre_eval(int order, double x);
double legendre_deriv(int order, double x);
void legendre_table(int max_order, double x, Eigen::Ref<Vector> values,
                    Eigen::Ref<Vector> derivs);

// Tensor-product basis of total order <= max_total_order over [-1,1]^dim.
class LegendreBasis {
 public:
  LegendreBasis(int dim, int max_total_order);

  Index size() const { return static_cast<Index>(indices_.size()); }
  int dim() const { return dim_; }
  int order() const { return order_; }
  const std::vector<std::vector<int>>& indices() const { return indices_; }

  // Row of basis values at z in [-1,1]^dim.
  Vector evaluate(const Eigen::Ref<const Vector>& z) const;
  // values plus the size x dim Jacobian of the basis at z.
  void evaluate_with_jacobian(const Eigen::Ref<const Vector>& z, Vector& values,
                              Matrix& jacobian) const;

 private:
  int dim_;
  int order_;
  std::vector<std::vector<int>> indices_;
};

// Affine map between a box and [-1,1]^dim.
struct BoxMap {
  Vector lo, hi;
  Vector to_unit(const Eigen::Ref<const Vector>& x) const {
    return (2.0 * (x - lo).array() / (hi - lo).array() - 1.0).matrix();
  }
  Vector from_unit(const Eigen::Ref<const Vector>& z) const {
    return (lo.array() + 0.5 * (z.array() + 1.0) * (hi - lo).array()).matrix();
  }
  // d z / d x, diagonal.
  Vector unit_scale() const { return (2.0 / (hi - lo).array()).matrix(); }
};

}  // namespace respfit::estimation
