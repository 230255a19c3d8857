#pragma once

#include "respfit/dynamics/model.hpp"
#include "respfit/rng.hpp"

#include <functional>

namespace respfit::dynamics {

enum class Integrator { EulerMaruyama, WeakTrapezoidal };

// x + b(x,t) dt + sigma(x) sqrt(dt) xi
Vector euler_maruyama_step(const SdeModel& model, const Eigen::Ref<const Vector>& state,
                           double t, double dt, const Eigen::Ref<const Vector>& gaussian_draws);

// Two-stage weak second-order scheme (theta = 1/2):
//   x* = x + f(x) h/2 + sigma(x) xi1 sqrt(h/2)
//   x+ = x* + (2 f(x*) - f(x)) h/2 + [2 a(x*) - a(x)]_+^{1/2} xi2 sqrt(h/2)
// with a = sigma sigma^T. For constant diffusion the bracket equals a and the
// matrix square root reduces to sigma itself.
Vector weak_trapezoidal_step(const SdeModel& model, const Eigen::Ref<const Vector>& state,
                             double t, double dt, const Eigen::Ref<const Vector>& draws);

// One BAOAB step of underdamped Langevin dynamics with unit masses,
// per-component friction gamma_i and local temperatures kT_i:
//   B: v += F(q) dt/2,  A: q += v dt/2,
//   O: v_i <- e^{-gamma_i dt} v_i + sqrt(kT_i (1 - e^{-2 gamma_i dt})) xi_i,
// then A, B again. The O sub-flow is the exact OU transition, so gamma = 0
// with zero noise reduces to velocity Verlet.
struct LangevinState {
  Vector positions;
  Vector velocities;
};

void langevin_splitting_step(LangevinState& s,
                             const std::function<void(const Eigen::Ref<const Vector>&, Eigen::Ref<Vector>)>& force,
                             const Eigen::Ref<const Vector>& gamma,
                             const Eigen::Ref<const Vector>& kT,
                             double dt, GaussianStream& rng,
                             Vector& force_buffer, bool force_buffer_valid);

struct SimulateOptions {
  double total_time = 0.0;
  double dt = 0.0;
  Index subsample_every = 1;
  double burn_in = 0.0;
  std::uint64_t seed = 0;
  Integrator integrator = Integrator::EulerMaruyama;
  Vector initial_state;  // empty -> zeros
};

// Integrates `model` and records every subsample_every-th step after the
// burn-in has elapsed. Deterministic for a fixed (seed, dt, integrator).
// Throws BlowupError with the failing time if the state leaves R^n.
TimeSeries simulate(const SdeModel& model, const SimulateOptions& opts);

}  // namespace respfit::dynamics
