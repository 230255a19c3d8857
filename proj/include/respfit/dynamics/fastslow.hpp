#pragma once

#include "respfit/common.hpp"

#include <array>

namespace respfit::dynamics {

// Two-dimensional linear fast-slow system
//   dx = (a11 x + a12 y) dt + sigma_x dWx
//   dy = (1/eps)(a21 x + a22 y) dt + (sigma_y/sqrt(eps)) dWy.
struct FastSlowParams {
  double a11, a12, a21, a22;
  double sigma_x, sigma_y;
  double epsilon;

  // Non-degeneracy: drift negative definite and averaged dynamics stable.
  bool valid() const {
    return sigma_x > 0 && sigma_y > 0 && a11 * a22 - a12 * a21 > 0 &&
           a11 + a22 / epsilon < 0 && a22 < 0;
  }

  Matrix drift_matrix() const {
    Matrix a(2, 2);
    a << a11, a12, a21 / epsilon, a22 / epsilon;
    return a;
  }
  Matrix noise_covariance() const {
    Matrix q = Matrix::Zero(2, 2);
    q(0, 0) = sigma_x * sigma_x;
    q(1, 1) = sigma_y * sigma_y / epsilon;
    return q;
  }

  // Averaged drift coefficient a~ = a11 - a12 a21 / a22.
  double averaged_drift() const { return a11 - a12 * a21 / a22; }

  // Eigenvalues of the drift matrix, slow one first. Requires a real spectrum.
  std::array<double, 2> drift_eigenvalues() const;
};

// Scalar surrogate dX = b X dt + sigma dW with b < 0, sigma > 0.
struct ReducedLinearParams {
  double b;
  double sigma;
  double variance() const { return -sigma * sigma / (2.0 * b); }
  double autocovariance(double t) const;
};

// The closed-form estimates of the reduced model, by expansion order in eps.
ReducedLinearParams fastslow_estimate_order0(const FastSlowParams& p);
ReducedLinearParams fastslow_estimate_order1(const FastSlowParams& p);
ReducedLinearParams fastslow_estimate_order_inf(const FastSlowParams& p);

// Exact slow-variable autocovariance E[x(t) x(0)] of the full system.
double fastslow_exact_autocovariance(const FastSlowParams& p, double t);

}  // namespace respfit::dynamics
