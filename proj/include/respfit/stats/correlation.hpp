#pragma once

#include "respfit/common.hpp"

#include <vector>

namespace respfit::stats {

// Lagged cross-moments E[A(t+lag) (x) B(t)] estimated from one stationary
// trajectory. values.row(k) holds the dimA x dimB matrix for lags[k],
// flattened row-major (index i*dimB + j for entry (i,j)).
struct CorrelationEstimate {
  Vector lags;             // lag times, strictly increasing, >= 0
  Matrix values;           // n_lags x (dimA*dimB)
  Matrix standard_errors;  // batch-means errors, same shape
  Index dim_a = 0;
  Index dim_b = 0;

  double value(Index lag_index, Index i, Index j) const {
    return values(lag_index, i * dim_b + j);
  }
  double stderr_at(Index lag_index, Index i, Index j) const {
    return standard_errors(lag_index, i * dim_b + j);
  }
};

// Monte-Carlo estimate (1/(M-k)) sum_i A_{i+k} (x) B_i for each lag index k.
// a and b are T x dimA / T x dimB sample matrices from the same trajectory;
// dt converts lag indices to lag times. Standard errors use non-overlapping
// batch means with ~sqrt(M-k) batches (samples are autocorrelated).
CorrelationEstimate cross_correlation(const Matrix& a, const Matrix& b, double dt,
                                      const std::vector<Index>& lag_indices);

// Sample averages of prod_j x_j^{e_j} with batch-means standard errors.
struct MomentEstimate {
  Vector values;
  Vector standard_errors;
};
MomentEstimate stationary_moments(const Matrix& samples,
                                  const std::vector<std::vector<int>>& monomial_exponents);

// Batch-means standard error of the mean of one autocorrelated series.
double batch_means_stderr(const Eigen::Ref<const Vector>& series);

}  // namespace respfit::stats
