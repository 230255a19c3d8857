#pragma once

#include "respfit/common.hpp"
#include "respfit/density/score_model.hpp"
#include "respfit/stats/correlation.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace respfit::response {

// Constant-in-time forcing pattern on the resolved components: the
// perturbation applied to the reduced dynamics is c_R * delta * f(t).
// Admissibility (the induced force depends on resolved variables only) holds
// by construction for these patterns.
struct ForcingSpec {
  Vector c_r;                              // pattern over the density's variables
  double delta = 0.0;                      // amplitude
  std::function<double(double)> time_profile;  // nullptr means f(t) == 1

  double profile(double t) const { return time_profile ? time_profile(t) : 1.0; }
};

// Conjugate variable of the response operator for a constant pattern:
//   B_i(x) = -(c_R)_i d/dx_i log p(x),
// evaluated through the density's score. Components with zero pattern are
// dropped from the output; active_components records which remain. Returns
// nullopt where the score is clipped. The density is captured by reference
// and must outlive the returned functor.
struct ConjugateVariable {
  std::function<std::optional<Vector>(const Eigen::Ref<const Vector>&)> eval;
  std::vector<Index> active_components;
  Index dim() const { return static_cast<Index>(active_components.size()); }
};

ConjugateVariable conjugate_variable(const density::ScoreModel& density,
                                     const ForcingSpec& forcing);

// Quasi-Gaussian conjugate: the same construction with a Gaussian fitted to
// the sample mean/covariance, B_i(u) = (c_R)_i [Cov^{-1}(u - mean)]_i.
ConjugateVariable qg_fdt_conjugate(const Matrix& samples, const ForcingSpec& forcing);

// Response operator values on a time grid: the fitting targets.
struct EssentialStatistics {
  Vector times;            // t_1..t_K, strictly positive unless lag 0 requested
  Matrix values;           // K x (dimA*dimB), row-major pairing as in
                           // CorrelationEstimate
  Matrix standard_errors;
  Index dim_a = 0;
  Index dim_b = 0;
  std::string observable;
  std::string conjugate;

  // Flattened view of selected (i,j) component curves, times-major.
  Vector flatten(const std::vector<std::pair<Index, Index>>& components) const;
};

// Estimates E[A(X(t_k)) (x) B(X(0))] from an equilibrium trajectory.
// observable maps a sample row to A; the conjugate is evaluated on the same
// row (clipped samples are skipped on both sides of the product and the lag-0
// divisor uses retained pairs only). More than max_clip_fraction clipped
// samples aborts: the estimate would be untrustworthy.
EssentialStatistics essential_statistics(
    const Matrix& data_values, double data_dt,
    const std::function<Vector(const Eigen::Ref<const Vector>&)>& observable,
    Index observable_dim, const ConjugateVariable& conjugate, const Vector& t_grid,
    double max_clip_fraction = 0.01);

}  // namespace respfit::response
