#pragma once

#include "respfit/common.hpp"
#include "respfit/density/score_model.hpp"

#include <optional>
#include <vector>

namespace respfit::density {

// Nonparametric density estimate in the Gaussian-weighted Hermite basis:
//   p(x') = sum_{|m|_1 <= M} f_m psi_m(x') q(x'),  f_m = (1/N) sum_n psi_m(X'_n),
// fitted on affinely whitened samples x' = L^{-1}(x - mean) and mapped back
// with the Jacobian 1/det(L). f_0 = 1 by construction. The truncated series
// may go negative in the tails; score evaluation clips at `clip_threshold`
// (in original-coordinate density units) and reports how often.
class KernelEmbeddingDensity final : public ScoreModel {
 public:
  int dimension() const override { return dim_; }
  int order() const { return order_; }
  const std::vector<std::vector<int>>& basis() const { return indices_; }
  const Vector& coefficients() const { return coefficients_; }
  const Vector& mean() const { return mean_; }
  const Matrix& whitening_factor() const { return chol_; }
  double clip_threshold() const { return clip_threshold_; }
  void set_clip_threshold(double t) { clip_threshold_ = t; }
  double kernel_decay() const { return rho_; }

  // Density in original coordinates; may be negative (truncation artifact).
  double density(const Eigen::Ref<const Vector>& x) const;

  // grad log p, or nullopt when density(x) < clip_threshold.
  std::optional<Vector> score(const Eigen::Ref<const Vector>& x) const override;

  // Score with the polynomial factor floored away from zero, defined
  // everywhere; in the far tail it approaches the whitened Gaussian score.
  // Used as a simulation drift where a hole in the estimate must not blow up
  // the integrator. floored is set when the floor was active.
  Vector score_floored(const Eigen::Ref<const Vector>& x, bool* floored = nullptr) const;

  // RKHS norm diagnostic sum_m f_m^2 / rho^{|m|_1}; rho is metadata only.
  double rkhs_norm_squared() const;

  friend KernelEmbeddingDensity kernel_embedding_fit(const Matrix& samples, int order,
                                                     double rho, bool whiten);
  friend KernelEmbeddingDensity kernel_embedding_from_coefficients(
      int dim, int order, const Vector& coefficients, const Vector& mean,
      const Matrix& whitening_factor, double rho);

 private:
  void whiten(const Eigen::Ref<const Vector>& x, Vector& xw) const;
  // Polynomial factor P(x') = sum f_m psi_m(x') and its gradient.
  double polynomial(const Vector& xw, Vector* grad) const;

  int dim_ = 0;
  int order_ = 0;
  std::vector<std::vector<int>> indices_;
  Vector coefficients_;
  Vector mean_;
  Matrix chol_;          // lower factor L of the sample covariance
  Matrix chol_inv_;      // L^{-1}
  double log_det_ = 0.0; // log det L
  double clip_threshold_ = 0.0;
  double rho_ = 0.5;
};

// Fits the order-M empirical embedding from T x d samples. Requires
// T >= 10 * (number of multi-indices) and a nonsingular sample covariance.
// clip_threshold defaults to 1e-4 times the maximum density over the sample.
KernelEmbeddingDensity kernel_embedding_fit(const Matrix& samples, int order,
                                            double rho = 0.5, bool whiten = true);

// Assembles an embedding from known coefficients (analytic references,
// deserialization). coefficients[0] must be 1.
KernelEmbeddingDensity kernel_embedding_from_coefficients(
    int dim, int order, const Vector& coefficients, const Vector& mean,
    const Matrix& whitening_factor, double rho = 0.5);

}  // namespace respfit::density
