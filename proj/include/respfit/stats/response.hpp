#pragma once

#include "respfit/common.hpp"
#include "respfit/stats/correlation.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace respfit::stats {

// Mean deviation Delta E[A](t) of an observable from its equilibrium value
// under a small external forcing, one column per observable component.
struct ResponseCurve {
  Vector times;
  Matrix delta_e;          // n_times x dimA
  Matrix standard_errors;  // empty for deterministic (convolution) curves
  std::string method;      // "full-MC", "linear-convolution", "QG-FDT", "MLR"
};

// Response predicted by the convolution of a response kernel with the
// forcing:  Delta E[A_i](t) = int_0^t sum_j k_{ij}(t-s) * delta * f(s) ds,
// trapezoidal rule on the kernel's (uniform, lag-0 based) grid. The returned
// curve is evaluated at every kernel lag.
ResponseCurve linear_response_convolution(const CorrelationEstimate& kernel,
                                          double delta,
                                          const std::function<double(double)>& time_profile);

// One realization of the perturbed dynamics from a given initial state:
// writes A(X(t)) for every requested time into `out` (n_times x dimA).
// Returns false if the trajectory blew up (the sample is then dropped).
using PerturbedPropagator = std::function<bool(
    const Eigen::Ref<const Vector>& initial_state, const Vector& times,
    std::uint64_t seed, Matrix& out)>;

struct FullResponseOptions {
  Index outer_n = 0;           // initial conditions drawn from the pool
  Index inner_m = 1;           // noise realizations per initial condition (1 for
                               // deterministic dynamics)
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double max_dropped_fraction = 1e-3;
};

// Two-layer Monte-Carlo full response: outer average over equilibrium states
// x_i taken from `equilibrium_pool` (evenly strided, unperturbed run), inner
// average over noise realizations of the perturbed dynamics started at x_i.
// The equilibrium reference uses the same x_i ensemble, so delta_e at t=0
// vanishes identically. Standard errors are over the outer layer. The outer
// accumulation is a pairwise tree reduction, reproducible for any thread
// count.
ResponseCurve full_response_mc(const PerturbedPropagator& propagate,
                               const std::function<Vector(const Eigen::Ref<const Vector>&)>& observable,
                               Index observable_dim,
                               const Matrix& equilibrium_pool, const Vector& t_grid,
                               const FullResponseOptions& opts);

}  // namespace respfit::stats
