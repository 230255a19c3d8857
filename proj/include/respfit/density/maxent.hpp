#pragma once

#include "respfit/common.hpp"
#include "respfit/density/score_model.hpp"

#include <optional>
#include <vector>

namespace respfit::density {

// Exponential-family density p(x) = exp(-sum_a lambda_a x^{e_a} - log Z) on a
// bounding box, fitted by moment matching. basis holds the monomial exponent
// tuples e_a; the box plus tensor Gauss-Legendre nodes define the quadrature
// used for Z and all moments.
class ExponentialFamilyDensity final : public ScoreModel {
 public:
  int dimension() const override { return dim_; }
  const std::vector<std::vector<int>>& basis() const { return basis_; }
  const Vector& coefficients() const { return lambda_; }
  double log_normalizer() const { return log_z_; }
  const Vector& box_lo() const { return box_lo_; }
  const Vector& box_hi() const { return box_hi_; }
  int nodes_per_axis() const { return nodes_per_axis_; }

  // Delta-method standard errors of the coefficients; empty unless the fit
  // was given a moment covariance.
  const Vector& coefficient_stderr() const { return coefficient_stderr_; }

  double log_density(const Eigen::Ref<const Vector>& x) const;
  double density(const Eigen::Ref<const Vector>& x) const;

  // Analytic gradient of the polynomial exponent; exact, no quadrature.
  std::optional<Vector> score(const Eigen::Ref<const Vector>& x) const override;

  // Moments of the basis monomials under this density (quadrature).
  Vector moments() const;

  friend struct MaxentFitter;
  friend ExponentialFamilyDensity exp_family_from_coefficients(
      int dim, const std::vector<std::vector<int>>& basis, const Vector& lambda,
      const Vector& box_lo, const Vector& box_hi, int nodes_per_axis);

 private:
  int dim_ = 0;
  std::vector<std::vector<int>> basis_;
  Vector lambda_;
  double log_z_ = 0.0;
  Vector box_lo_, box_hi_;
  int nodes_per_axis_ = 64;
  Vector coefficient_stderr_;
};

struct MaxentOptions {
  Vector box_lo, box_hi;       // quadrature box (e.g. mean +- 8 std of the data)
  int nodes_per_axis = 64;
  double tol = 1e-6;           // relative moment-residual tolerance
  int max_iterations = 200;
  Vector initial_lambda;       // empty -> Gaussian-ish start from 2nd moments
  // Empirical covariance of the target moment vector (batch means over the
  // sample); enables coefficient standard errors via the delta method.
  Matrix moment_covariance;
};

// Minimizes the dual  log Z(lambda) + lambda . targets  by damped Newton.
// Gradient is the moment mismatch, Hessian the basis covariance, so the
// returned density's basis moments match `targets` within opts.tol relative.
// The coefficient of the highest pure even power in each direction is kept
// positive (coercivity) by step damping.
ExponentialFamilyDensity maxent_fit(const Vector& targets,
                                    const std::vector<std::vector<int>>& basis, int dim,
                                    const MaxentOptions& opts);

// Direct construction (known coefficients); normalizes on the box.
ExponentialFamilyDensity exp_family_from_coefficients(
    int dim, const std::vector<std::vector<int>>& basis, const Vector& lambda,
    const Vector& box_lo, const Vector& box_hi, int nodes_per_axis = 64);

}  // namespace respfit::density
