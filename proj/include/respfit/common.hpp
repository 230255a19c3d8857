#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace respfit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Numerical failure that should abort the current computation (bad pivot,
// singular system, non-convergence). Message carries the diagnostic.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Trajectory produced a non-finite state. Carries the failure location so the
// caller can report the time of the blow-up or treat the parameter point as
// infeasible.
class BlowupError : public NumericalError {
 public:
  BlowupError(const std::string& what, double time, std::int64_t step)
      : NumericalError(what), time_(time), step_(step) {}
  double time() const { return time_; }
  std::int64_t step() const { return step_; }

 private:
  double time_;
  std::int64_t step_;
};

// Score requested where the estimated density is below the clip threshold.
class ClipError : public NumericalError {
 public:
  ClipError(const std::string& what, double density)
      : NumericalError(what), density_(density) {}
  double density() const { return density_; }

 private:
  double density_;
};

inline bool all_finite(const Eigen::Ref<const Vector>& v) {
  return v.allFinite();
}

inline bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

}  // namespace respfit
