#pragma once

#include "respfit/common.hpp"

#include <vector>

namespace respfit::density {

// Probabilists' Hermite polynomial normalized to unit L^2 norm under the
// standard Gaussian weight: psi_m = He_m / sqrt(m!), via the stable
// recurrence psi_{m+1} = (x psi_m - sqrt(m) psi_{m-1}) / sqrt(m+1).
double hermite_eval(int order, double x);

// d/dx psi_m = sqrt(m) psi_{m-1}.
double hermite_deriv(int order, double x);

// psi_0..psi_max_order at x in one pass.
void hermite_table(int max_order, double x, Eigen::Ref<Vector> out);

// Closed form of the Gaussian-weighted Hermite kernel
//   sum_m rho^{|m|_1} Psi_m(x) Psi_m(y),  Psi_m = psi_m q,
// = (2 pi)^{-d} (1-rho^2)^{-d/2} exp[-(|x|^2+|y|^2-2 rho x.y)/(2(1-rho^2))].
double mehler_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                     double rho);

// All multi-indices m >= 0 with |m|_1 <= max_total_order, graded
// lexicographic: sorted by total order, then lexicographically. The first
// entry is always the zero index.
std::vector<std::vector<int>> multi_indices(int dim, int max_total_order);

// Gauss-Legendre nodes/weights on [a, b] (Golub-Welsch).
struct QuadratureRule {
  Vector nodes;
  Vector weights;
};
QuadratureRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite for the normalized Gaussian weight exp(-x^2/2)/sqrt(2 pi);
// weights sum to 1.
QuadratureRule gauss_hermite(int n);

}  // namespace respfit::density
