#include "respfit/response/essential.hpp"

#include "respfit/density/kernel_embedding.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace respfit::response {

ConjugateVariable conjugate_variable(const density::ScoreModel& density,
                                     const ForcingSpec& forcing) {
  if (forcing.c_r.size() != density.dimension())
    throw NumericalError("conjugate_variable: forcing pattern dimension mismatch");

  ConjugateVariable b;
  for (Index i = 0; i < forcing.c_r.size(); ++i)
    if (forcing.c_r[i] != 0.0) b.active_components.push_back(i);

  const Vector pattern = forcing.c_r;
  const auto active = b.active_components;
  const density::ScoreModel* model = &density;
  b.eval = [model, pattern, active](const Eigen::Ref<const Vector>& x)
      -> std::optional<Vector> {
    if (active.empty()) return Vector::Zero(0);
    auto s = model->score(x);
    if (!s) return std::nullopt;
    Vector out(static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
      out[static_cast<Index>(k)] = -pattern[active[k]] * (*s)[active[k]];
    return out;
  };
  return b;
}

ConjugateVariable qg_fdt_conjugate(const Matrix& samples, const ForcingSpec& forcing) {
  const Vector mean = samples.colwise().mean();
  Matrix centered = samples.rowwise() - mean.transpose();
  Matrix cov = centered.transpose() * centered / double(samples.rows() - 1);
  // GaussianScore rejects a singular covariance (e.g. constant samples).
  auto gauss = std::make_shared<density::GaussianScore>(mean, cov);

  ConjugateVariable b;
  for (Index i = 0; i < forcing.c_r.size(); ++i)
    if (forcing.c_r[i] != 0.0) b.active_components.push_back(i);
  const Vector pattern = forcing.c_r;
  const auto active = b.active_components;
  b.eval = [gauss, pattern, active](const Eigen::Ref<const Vector>& x)
      -> std::optional<Vector> {
    if (active.empty()) return Vector::Zero(0);
    Vector s = *gauss->score(x);
    Vector out(static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k)
      out[static_cast<Index>(k)] = -pattern[active[k]] * s[active[k]];
    return out;
  };
  return b;
}

Vector EssentialStatistics::flatten(
    const std::vector<std::pair<Index, Index>>& components) const {
  Vector out(times.size() * static_cast<Index>(components.size()));
  Index at = 0;
  for (Index t = 0; t < times.size(); ++t)
    for (const auto& [i, j] : components) out[at++] = values(t, i * dim_b + j);
  return out;
}

EssentialStatistics essential_statistics(
    const Matrix& data_values, double data_dt,
    const std::function<Vector(const Eigen::Ref<const Vector>&)>& observable,
    Index observable_dim, const ConjugateVariable& conjugate, const Vector& t_grid,
    double max_clip_fraction) {
  const Index t_len = data_values.rows();
  const Index dim_b = conjugate.dim();

  std::vector<Index> lag_indices;
  lag_indices.reserve(static_cast<std::size_t>(t_grid.size()));
  for (Index k = 0; k < t_grid.size(); ++k) {
    const double ratio = t_grid[k] / data_dt;
    const auto lag = static_cast<Index>(std::llround(ratio));
    if (std::abs(ratio - double(lag)) > 1e-8)
      throw NumericalError("essential_statistics: grid time not a multiple of data dt");
    lag_indices.push_back(lag);
  }

  Matrix a_vals(t_len, observable_dim);
  Matrix b_vals = Matrix::Zero(t_len, dim_b);
  std::vector<char> valid(static_cast<std::size_t>(t_len), 1);
  Index clipped = 0;
  for (Index n = 0; n < t_len; ++n) {
    a_vals.row(n) = observable(data_values.row(n).transpose());
    auto b = conjugate.eval(data_values.row(n).transpose());
    if (b) {
      b_vals.row(n) = *b;
    } else {
      valid[static_cast<std::size_t>(n)] = 0;
      ++clipped;
    }
  }
  if (double(clipped) > max_clip_fraction * double(t_len)) {
    std::ostringstream msg;
    msg << "essential_statistics: " << clipped << " of " << t_len
        << " samples clipped; estimate untrustworthy";
    throw NumericalError(msg.str());
  }

  EssentialStatistics out;
  out.dim_a = observable_dim;
  out.dim_b = dim_b;
  out.times = t_grid;
  out.values.resize(t_grid.size(), observable_dim * dim_b);
  out.standard_errors.resize(t_grid.size(), observable_dim * dim_b);

  if (clipped == 0) {
    auto corr = stats::cross_correlation(a_vals, b_vals, data_dt, lag_indices);
    out.values = corr.values;
    out.standard_errors = corr.standard_errors;
    return out;
  }

  // Clipped samples are skipped, not zeroed; the divisor is the retained
  // count so the estimate stays unbiased on the retained region.
  Vector products;
  for (std::size_t li = 0; li < lag_indices.size(); ++li) {
    const Index k = lag_indices[li];
    if (k >= t_len) throw NumericalError("essential_statistics: lag beyond data length");
    const Index m = t_len - k;
    for (Index i = 0; i < observable_dim; ++i)
      for (Index j = 0; j < dim_b; ++j) {
        products.resize(m);
        Index kept = 0;
        for (Index n = 0; n < m; ++n)
          if (valid[static_cast<std::size_t>(n)])
            products[kept++] = a_vals(n + k, i) * b_vals(n, j);
        products.conservativeResize(kept);
        out.values(static_cast<Index>(li), i * dim_b + j) = products.mean();
        out.standard_errors(static_cast<Index>(li), i * dim_b + j) =
            stats::batch_means_stderr(products);
      }
  }
  return out;
}

}  // namespace respfit::response
