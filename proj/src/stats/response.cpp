#include "respfit/stats/response.hpp"

#include "respfit/parallel.hpp"
#include "respfit/rng.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

namespace respfit::stats {

ResponseCurve linear_response_convolution(const CorrelationEstimate& kernel,
                                          double delta,
                                          const std::function<double(double)>& time_profile) {
  const Index n = kernel.lags.size();
  if (n < 2) throw NumericalError("linear_response_convolution: need at least two lags");
  if (std::abs(kernel.lags[0]) > 1e-14)
    throw NumericalError("linear_response_convolution: kernel grid must start at lag 0");
  const double h = kernel.lags[1] - kernel.lags[0];
  for (Index k = 1; k < n; ++k)
    if (std::abs(kernel.lags[k] - kernel.lags[k - 1] - h) > 1e-10 * h)
      throw NumericalError("linear_response_convolution: kernel grid must be uniform");

  ResponseCurve out;
  out.method = "linear-convolution";
  out.times = kernel.lags;
  out.delta_e = Matrix::Zero(n, kernel.dim_a);

  // g_j = sum_over_B_components k(t_m - s_j) * f(s_j); trapezoid over j.
  for (Index m = 0; m < n; ++m) {
    for (Index i = 0; i < kernel.dim_a; ++i) {
      double acc = 0.0;
      for (Index j = 0; j <= m; ++j) {
        double kernel_sum = 0.0;
        for (Index c = 0; c < kernel.dim_b; ++c) kernel_sum += kernel.value(m - j, i, c);
        const double g = kernel_sum * time_profile(kernel.lags[j]);
        const double w = (j == 0 || j == m) ? 0.5 : 1.0;
        acc += w * g;
      }
      out.delta_e(m, i) = delta * h * acc;
    }
  }
  return out;
}

ResponseCurve full_response_mc(const PerturbedPropagator& propagate,
                               const std::function<Vector(const Eigen::Ref<const Vector>&)>& observable,
                               Index observable_dim,
                               const Matrix& equilibrium_pool, const Vector& t_grid,
                               const FullResponseOptions& opts) {
  const Index pool_size = equilibrium_pool.rows();
  if (opts.outer_n > pool_size)
    throw NumericalError("full_response_mc: outer_n exceeds equilibrium pool size");
  if (opts.outer_n < 1 || opts.inner_m < 1)
    throw NumericalError("full_response_mc: need outer_n, inner_m >= 1");

  const Index n_t = t_grid.size();
  const Index stride = pool_size / opts.outer_n;

  // Per-initial-condition inner means and the unperturbed reference A(x_i).
  std::vector<Matrix> inner_mean(static_cast<std::size_t>(opts.outer_n));
  std::vector<Vector> reference(static_cast<std::size_t>(opts.outer_n));
  std::vector<char> valid(static_cast<std::size_t>(opts.outer_n), 0);
  std::atomic<std::int64_t> dropped{0};

  parallel_for(static_cast<std::size_t>(opts.outer_n), opts.threads, [&](std::size_t ii) {
    const Index i = static_cast<Index>(ii);
    const Vector x0 = equilibrium_pool.row(i * stride);
    Matrix traj(n_t, observable_dim);
    Matrix acc = Matrix::Zero(n_t, observable_dim);
    Index ok = 0;
    for (Index j = 0; j < opts.inner_m; ++j) {
      const std::uint64_t seed =
          derive_seed(opts.seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(opts.inner_m) + static_cast<std::uint64_t>(j));
      if (propagate(x0, t_grid, seed, traj)) {
        acc += traj;
        ++ok;
      } else {
        dropped.fetch_add(1);
      }
    }
    if (ok > 0) {
      inner_mean[ii] = acc / double(ok);
      reference[ii] = observable(x0);
      valid[ii] = 1;
    }
  });

  const double total = double(opts.outer_n) * double(opts.inner_m);
  if (double(dropped.load()) > opts.max_dropped_fraction * total) {
    std::ostringstream msg;
    msg << "full_response_mc: " << dropped.load() << " of " << total
        << " trajectories blew up (limit " << opts.max_dropped_fraction * 100 << "%)";
    throw NumericalError(msg.str());
  }

  // Deviation per initial condition, then pairwise tree reduction over the
  // outer layer for mean and variance.
  std::vector<Matrix> dev;
  dev.reserve(static_cast<std::size_t>(opts.outer_n));
  for (std::size_t ii = 0; ii < valid.size(); ++ii)
    if (valid[ii]) {
      Matrix d = inner_mean[ii];
      d.rowwise() -= reference[ii].transpose();
      dev.push_back(std::move(d));
    }
  const auto n_valid = static_cast<double>(dev.size());
  if (dev.empty()) throw NumericalError("full_response_mc: all trajectories dropped");

  const Matrix zero = Matrix::Zero(n_t, observable_dim);
  Matrix mean = pairwise_reduce(dev, zero, [](const Matrix& a, const Matrix& b) -> Matrix {
                  return a + b;
                }) /
                n_valid;
  std::vector<Matrix> sq;
  sq.reserve(dev.size());
  for (const auto& d : dev) sq.push_back((d - mean).array().square().matrix());
  Matrix var = pairwise_reduce(sq, zero, [](const Matrix& a, const Matrix& b) -> Matrix {
                 return a + b;
               }) /
               std::max(1.0, n_valid - 1.0);

  ResponseCurve out;
  out.method = "full-MC";
  out.times = t_grid;
  out.delta_e = mean;
  out.standard_errors = (var / n_valid).cwiseSqrt();
  return out;
}

}  // namespace respfit::stats
