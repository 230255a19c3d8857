#pragma once

#include "respfit/common.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>

namespace respfit::dynamics {

// Ito diffusion  dX = b(X,t) dt + sigma(X) dW.
// All models in this project have state-independent diffusion; the general
// callback form is kept for the few tests that exercise it.
struct SdeModel {
  Index dimension = 0;
  Index noise_dimension = 0;
  // drift(x, t, out); the time argument carries additive external forcing.
  std::function<void(const Eigen::Ref<const Vector>&, double, Eigen::Ref<Vector>)> drift;
  // Constant diffusion matrix (dimension x noise_dimension). Empty when the
  // state-dependent callback below is set instead.
  Matrix sigma;
  std::function<Matrix(const Eigen::Ref<const Vector>&)> sigma_fn;
  std::map<std::string, double> parameters;

  bool constant_diffusion() const { return !sigma_fn; }
  Matrix diffusion_at(const Eigen::Ref<const Vector>& x) const {
    return sigma_fn ? sigma_fn(x) : sigma;
  }
};

// Uniformly sampled equilibrium trajectory; the data currency every module
// consumes. values is T x n, row t is the state at time t*dt after burn-in.
struct TimeSeries {
  double dt = 0.0;
  Matrix values;
  std::uint64_t seed = 0;
  double burn_in = 0.0;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
};

// Scalar OU model dX = b X dt + sigma dW, b < 0; equilibrium variance
// S = -sigma^2 / (2 b).
SdeModel ou_model(double b, double sigma);

inline double ou_equilibrium_variance(double b, double sigma) {
  return -sigma * sigma / (2.0 * b);
}

}  // namespace respfit::dynamics
