#include "respfit/dynamics/integrators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace respfit::dynamics {

SdeModel ou_model(double b, double sigma) {
  SdeModel m;
  m.dimension = 1;
  m.noise_dimension = 1;
  m.drift = [b](const Eigen::Ref<const Vector>& x, double, Eigen::Ref<Vector> out) {
    out[0] = b * x[0];
  };
  m.sigma = Matrix::Constant(1, 1, sigma);
  m.parameters = {{"b", b}, {"sigma", sigma}};
  return m;
}

Vector euler_maruyama_step(const SdeModel& model, const Eigen::Ref<const Vector>& state,
                           double t, double dt, const Eigen::Ref<const Vector>& draws) {
  Vector b(model.dimension);
  model.drift(state, t, b);
  Vector next = state + dt * b;
  if (model.constant_diffusion()) {
    if (model.sigma.size() > 0) next.noalias() += std::sqrt(dt) * (model.sigma * draws);
  } else {
    next.noalias() += std::sqrt(dt) * (model.sigma_fn(state) * draws);
  }
  return next;
}

namespace {

// Positive-semidefinite square root with negative eigenvalues clamped to
// zero (the [.]_+ projection of the weak trapezoidal scheme).
Matrix psd_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.transpose()));
  Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Vector weak_trapezoidal_step(const SdeModel& model, const Eigen::Ref<const Vector>& state,
                             double t, double dt, const Eigen::Ref<const Vector>& draws) {
  const double h2 = 0.5 * dt;
  const double sq = std::sqrt(h2);
  const Index nw = model.noise_dimension;
  Vector f0(model.dimension), f1(model.dimension);
  model.drift(state, t, f0);

  Vector mid = state + h2 * f0;
  if (model.constant_diffusion()) {
    if (model.sigma.size() > 0) mid.noalias() += sq * (model.sigma * draws.head(nw));
  } else {
    mid.noalias() += sq * (model.sigma_fn(state) * draws.head(nw));
  }

  model.drift(mid, t + h2, f1);
  Vector next = mid + h2 * (2.0 * f1 - f0);
  if (model.constant_diffusion()) {
    if (model.sigma.size() > 0) next.noalias() += sq * (model.sigma * draws.tail(nw));
  } else {
    Matrix s0 = model.sigma_fn(state);
    Matrix s1 = model.sigma_fn(mid);
    Matrix bracket = 2.0 * (s1 * s1.transpose()) - s0 * s0.transpose();
    next.noalias() += sq * (psd_sqrt(bracket) * draws.tail(nw));
  }
  return next;
}

void langevin_splitting_step(LangevinState& s,
                             const std::function<void(const Eigen::Ref<const Vector>&, Eigen::Ref<Vector>)>& force,
                             const Eigen::Ref<const Vector>& gamma,
                             const Eigen::Ref<const Vector>& kT,
                             double dt, GaussianStream& rng,
                             Vector& force_buffer, bool force_buffer_valid) {
  const Index n = s.positions.size();
  if (!force_buffer_valid) {
    force_buffer.resize(n);
    force(s.positions, force_buffer);
  }
  s.velocities.noalias() += 0.5 * dt * force_buffer;
  s.positions.noalias() += 0.5 * dt * s.velocities;
  for (Index i = 0; i < n; ++i) {
    const double c1 = std::exp(-gamma[i] * dt);
    const double c2 = std::sqrt(kT[i] * (1.0 - c1 * c1));
    s.velocities[i] = c1 * s.velocities[i] + c2 * rng.normal();
  }
  s.positions.noalias() += 0.5 * dt * s.velocities;
  force(s.positions, force_buffer);
  s.velocities.noalias() += 0.5 * dt * force_buffer;
}

TimeSeries simulate(const SdeModel& model, const SimulateOptions& opts) {
  if (opts.dt <= 0.0) throw NumericalError("simulate: dt must be positive");
  if (opts.subsample_every < 1) throw NumericalError("simulate: subsample_every must be >= 1");
  if (opts.total_time <= opts.burn_in)
    throw NumericalError("simulate: total_time must exceed burn_in");

  const auto burn_steps = static_cast<std::int64_t>(std::llround(opts.burn_in / opts.dt));
  const auto total_steps = static_cast<std::int64_t>(std::llround(opts.total_time / opts.dt));
  const Index n_records =
      static_cast<Index>((total_steps - burn_steps) / opts.subsample_every);

  TimeSeries out;
  out.dt = opts.dt * static_cast<double>(opts.subsample_every);
  out.seed = opts.seed;
  out.burn_in = opts.burn_in;
  out.values.resize(n_records, model.dimension);

  GaussianStream rng(opts.seed);
  Vector x = opts.initial_state.size() > 0 ? opts.initial_state
                                           : Vector::Zero(model.dimension);
  const Index draws_per_step =
      (opts.integrator == Integrator::WeakTrapezoidal) ? 2 * model.noise_dimension
                                                       : model.noise_dimension;
  Vector draws(draws_per_step);

  Index recorded = 0;
  for (std::int64_t step = 0; step < total_steps && recorded < n_records; ++step) {
    const double t = static_cast<double>(step) * opts.dt;
    rng.fill_normal(draws);
    x = (opts.integrator == Integrator::WeakTrapezoidal)
            ? weak_trapezoidal_step(model, x, t, opts.dt, draws)
            : euler_maruyama_step(model, x, t, opts.dt, draws);
    if (!all_finite(x)) {
      std::ostringstream msg;
      msg << "simulate: non-finite state at t=" << t + opts.dt << " (step " << step << ")";
      throw BlowupError(msg.str(), t + opts.dt, step);
    }
    const std::int64_t k = step + 1 - burn_steps;
    if (k > 0 && k % opts.subsample_every == 0) out.values.row(recorded++) = x;
  }
  out.values.conservativeResize(recorded, Eigen::NoChange);
  return out;
}

}  // namespace respfit::dynamics
