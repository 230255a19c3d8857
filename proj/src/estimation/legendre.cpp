#include "respfit/estimation/legendre.hpp"

#include "respfit/density/hermite.hpp"  // multi_indices

#include <cmath>

namespace respfit::estimation {

namespace {

// Unnormalized P_n and P_n' by the three-term recurrence
// (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1};  P'_{n+1} = P'_{n-1} + (2n+1) P_n.
void raw_legendre(int max_order, double x, Vector& p, Vector& dp) {
  p.resize(max_order + 1);
  dp.resize(max_order + 1);
  p[0] = 1.0;
  dp[0] = 0.0;
  if (max_order == 0) return;
  p[1] = x;
  dp[1] = 1.0;
  for (int n = 1; n < max_order; ++n) {
    p[n + 1] = ((2.0 * n + 1.0) * x * p[n] - double(n) * p[n - 1]) / double(n + 1);
    dp[n + 1] = dp[n - 1] + (2.0 * n + 1.0) * p[n];
  }
}

}  // namespace

double legendre_eval(int order, double x) {
  Vector p, dp;
  raw_legendre(order, x, p, dp);
  return std::sqrt(2.0 * order + 1.0) * p[order];
}

double legendre_deriv(int order, double x) {
  Vector p, dp;
  raw_legendre(order, x, p, dp);
  return std::sqrt(2.0 * order + 1.0) * dp[order];
}

void legendre_table(int max_order, double x, Eigen::Ref<Vector> values,
                    Eigen::Ref<Vector> derivs) {
  Vector p, dp;
  raw_legendre(max_order, x, p, dp);
  for (int n = 0; n <= max_order; ++n) {
    const double c = std::sqrt(2.0 * n + 1.0);
    values[n] = c * p[n];
    derivs[n] = c * dp[n];
  }
}

LegendreBasis::LegendreBasis(int dim, int max_total_order)
    : dim_(dim), order_(max_total_order),
      indices_(density::multi_indices(dim, max_total_order)) {}

Vector LegendreBasis::evaluate(const Eigen::Ref<const Vector>& z) const {
  Matrix table(order_ + 1, dim_);
  Matrix dtable(order_ + 1, dim_);
  for (int k = 0; k < dim_; ++k) legendre_table(order_, z[k], table.col(k), dtable.col(k));
  Vector out(size());
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    double prod = 1.0;
    for (int k = 0; k < dim_; ++k)
      prod *= table(indices_[a][static_cast<std::size_t>(k)], k);
    out[static_cast<Index>(a)] = prod;
  }
  return out;
}

void LegendreBasis::evaluate_with_jacobian(const Eigen::Ref<const Vector>& z,
                                           Vector& values, Matrix& jacobian) const {
  Matrix table(order_ + 1, dim_);
  Matrix dtable(order_ + 1, dim_);
  for (int k = 0; k < dim_; ++k) legendre_table(order_, z[k], table.col(k), dtable.col(k));
  values.resize(size());
  jacobian.resize(size(), dim_);
  for (std::size_t a = 0; a < indices_.size(); ++a) {
    double prod = 1.0;
    for (int k = 0; k < dim_; ++k)
      prod *= table(indices_[a][static_cast<std::size_t>(k)], k);
    values[static_cast<Index>(a)] = prod;
    for (int k = 0; k < dim_; ++k) {
      double dprod = 1.0;
      for (int l = 0; l < dim_; ++l) {
        const int ml = indices_[a][static_cast<std::size_t>(l)];
        dprod *= (l == k) ? dtable(ml, l) : table(ml, l);
      }
      jacobian(static_cast<Index>(a), k) = dprod;
    }
  }
}

}  // namespace respfit::estimation
