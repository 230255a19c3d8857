#include "respfit/stats/correlation.hpp"

#include <cmath>
#include <limits>

namespace respfit::stats {

double batch_means_stderr(const Eigen::Ref<const Vector>& series) {
  const Index n = series.size();
  if (n < 4) return std::numeric_limits<double>::quiet_NaN();
  const Index n_batches = static_cast<Index>(std::floor(std::sqrt(double(n))));
  const Index len = n / n_batches;
  Vector means(n_batches);
  for (Index b = 0; b < n_batches; ++b) means[b] = series.segment(b * len, len).mean();
  const double grand = means.mean();
  const double var = (means.array() - grand).square().sum() / double(n_batches - 1);
  return std::sqrt(var / double(n_batches));
}

CorrelationEstimate cross_correlation(const Matrix& a, const Matrix& b, double dt,
                                      const std::vector<Index>& lag_indices) {
  if (a.rows() != b.rows()) throw NumericalError("cross_correlation: length mismatch");
  const Index t = a.rows();
  const Index da = a.cols();
  const Index db = b.cols();

  CorrelationEstimate out;
  out.dim_a = da;
  out.dim_b = db;
  out.lags.resize(static_cast<Index>(lag_indices.size()));
  out.values.resize(static_cast<Index>(lag_indices.size()), da * db);
  out.standard_errors.resize(static_cast<Index>(lag_indices.size()), da * db);

  Vector products;
  for (std::size_t li = 0; li < lag_indices.size(); ++li) {
    const Index k = lag_indices[li];
    if (k < 0 || k >= t) throw NumericalError("cross_correlation: lag out of range");
    const Index m = t - k;
    out.lags[static_cast<Index>(li)] = double(k) * dt;
    for (Index i = 0; i < da; ++i)
      for (Index j = 0; j < db; ++j) {
        products = a.col(i).segment(k, m).cwiseProduct(b.col(j).head(m));
        out.values(static_cast<Index>(li), i * db + j) = products.mean();
        out.standard_errors(static_cast<Index>(li), i * db + j) = batch_means_stderr(products);
      }
  }
  return out;
}

MomentEstimate stationary_moments(const Matrix& samples,
                                  const std::vector<std::vector<int>>& monomial_exponents) {
  const Index t = samples.rows();
  MomentEstimate out;
  out.values.resize(static_cast<Index>(monomial_exponents.size()));
  out.standard_errors.resize(static_cast<Index>(monomial_exponents.size()));
  Vector series(t);
  for (std::size_t m = 0; m < monomial_exponents.size(); ++m) {
    const auto& e = monomial_exponents[m];
    if (static_cast<Index>(e.size()) != samples.cols())
      throw NumericalError("stationary_moments: exponent dimension mismatch");
    series.setOnes();
    for (Index j = 0; j < samples.cols(); ++j)
      for (int p = 0; p < e[static_cast<std::size_t>(j)]; ++p)
        series = series.cwiseProduct(samples.col(j));
    out.values[static_cast<Index>(m)] = series.mean();
    out.standard_errors[static_cast<Index>(m)] = batch_means_stderr(series);
  }
  return out;
}

}  // namespace respfit::stats
