#pragma once

#include "respfit/common.hpp"

#include <optional>

namespace respfit::density {

// A density estimate that can report its log-density gradient. score()
// returns nullopt where the estimate is unusable (below its clip threshold);
// callers decide whether to skip the sample or fail.
class ScoreModel {
 public:
  virtual ~ScoreModel() = default;
  virtual int dimension() const = 0;
  virtual std::optional<Vector> score(const Eigen::Ref<const Vector>& x) const = 0;
};

// Gaussian with moments (mean, covariance): score(x) = -Cov^{-1}(x - mean).
class GaussianScore final : public ScoreModel {
 public:
  GaussianScore(Vector mean, const Matrix& covariance);

  int dimension() const override { return static_cast<int>(mean_.size()); }
  std::optional<Vector> score(const Eigen::Ref<const Vector>& x) const override {
    return Vector(-(precision_ * (x - mean_)));
  }
  const Matrix& precision() const { return precision_; }

 private:
  Vector mean_;
  Matrix precision_;
};

}  // namespace respfit::density
