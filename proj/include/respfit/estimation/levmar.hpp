#pragma once

#include "respfit/common.hpp"
#include "respfit/estimation/space.hpp"

#include <cstdint>
#include <functional>

namespace respfit::estimation {

// Residual callback: fills r(theta) and, when jacobian != nullptr, the
// n_residuals x dim Jacobian. Return false to mark theta unusable.
using ResidualFn = std::function<bool(const Eigen::Ref<const Vector>& theta,
                                      Vector& residuals, Matrix* jacobian)>;

struct LevMarOptions {
  int max_iterations = 200;
  double tol_cost = 1e-14;
  double tol_step = 1e-12;
  double initial_mu = 1e-3;
  double fd_step = 1e-7;  // forward-difference step when no Jacobian is provided
};

struct LevMarResult {
  Vector theta;
  double cost = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Levenberg-Marquardt with box projection. Infeasible trial points (box or
// structural constraints) are rejected by inflating the damping parameter.
LevMarResult levenberg_marquardt(const ResidualFn& fn, const ParameterSpace& space,
                                 const Vector& start, const LevMarOptions& opts = {});

// Deterministic Latin hypercube over the box (seeded); infeasible rows are
// resampled so every returned point satisfies the space's constraints.
Matrix latin_hypercube(const ParameterSpace& space, Index count, std::uint64_t seed);

struct MultistartResult {
  LevMarResult best;
  Index n_starts = 0;
  Index n_converged = 0;
};

// LM from `count` Latin-hypercube starts; returns the feasible minimizer with
// the lowest cost.
MultistartResult minimize_multistart(const ResidualFn& fn, const ParameterSpace& space,
                                     Index count, std::uint64_t seed,
                                     const LevMarOptions& opts = {});

}  // namespace respfit::estimation
