#include "respfit/dynamics/fastslow.hpp"

#include "respfit/dynamics/linalg.hpp"

#include <cmath>

namespace respfit::dynamics {

std::array<double, 2> FastSlowParams::drift_eigenvalues() const {
  const double tr = a11 + a22 / epsilon;
  const double disc = tr * tr - 4.0 * a22 * averaged_drift() / epsilon;
  if (disc < 0.0)
    throw NumericalError("fastslow: complex drift spectrum, expansion not applicable");
  const double root = std::sqrt(disc);
  // tr < 0: the + branch is the slow (less negative) eigenvalue.
  return {0.5 * (tr + root), 0.5 * (tr - root)};
}

double ReducedLinearParams::autocovariance(double t) const {
  return variance() * std::exp(b * t);
}

ReducedLinearParams fastslow_estimate_order0(const FastSlowParams& p) {
  return {p.averaged_drift(), p.sigma_x};
}

ReducedLinearParams fastslow_estimate_order1(const FastSlowParams& p) {
  const double at = p.averaged_drift();
  const double a22sq = p.a22 * p.a22;
  const double b = at - p.epsilon * p.a12 * p.a21 * at / a22sq;
  const double s2 = p.sigma_x * p.sigma_x -
                    p.epsilon *
                        (2.0 * p.sigma_x * p.sigma_x * p.a12 * p.a21 -
                         p.sigma_y * p.sigma_y * p.a12 * p.a12) /
                        a22sq;
  return {b, std::sqrt(s2)};
}

ReducedLinearParams fastslow_estimate_order_inf(const FastSlowParams& p) {
  const auto [l1, l2] = p.drift_eigenvalues();
  const Matrix cov = lyapunov_solve(p.drift_matrix(), p.noise_covariance());
  // Keep only the slow-eigenvalue contribution of [e^{tA} Cov]_{11}:
  //   coefficient = (Cov11 (l2 - a11) - Cov21 a12) / (l2 - l1).
  const double coef = (cov(0, 0) * (l2 - p.a11) - cov(1, 0) * p.a12) / (l2 - l1);
  const double s2 = -2.0 * l1 * coef;
  return {l1, std::sqrt(s2)};
}

double fastslow_exact_autocovariance(const FastSlowParams& p, double t) {
  const Matrix cov = lyapunov_solve(p.drift_matrix(), p.noise_covariance());
  return exact_autocovariance(p.drift_matrix(), cov, t)(0, 0);
}

}  // namespace respfit::dynamics
