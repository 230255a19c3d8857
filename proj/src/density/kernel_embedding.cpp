#include "respfit/density/kernel_embedding.hpp"

#include "respfit/density/hermite.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>
#include <sstream>

namespace respfit::density {

GaussianScore::GaussianScore(Vector mean, const Matrix& covariance) : mean_(std::move(mean)) {
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() != Eigen::Success)
    throw NumericalError("GaussianScore: covariance not positive definite");
  precision_ = llt.solve(Matrix::Identity(covariance.rows(), covariance.cols()));
}

void KernelEmbeddingDensity::whiten(const Eigen::Ref<const Vector>& x, Vector& xw) const {
  xw = chol_inv_ * (x - mean_);
}

double KernelEmbeddingDensity::polynomial(const Vector& xw, Vector* grad) const {
  // Per-axis tables psi_0..psi_M(x_k) and derivatives sqrt(m) psi_{m-1}.
  Matrix table(order_ + 1, dim_);
  for (int k = 0; k < dim_; ++k) hermite_table(order_, xw[k], table.col(k));

  double p = 0.0;
  if (grad) grad->setZero(dim_);
  for (std::size_t mi = 0; mi < indices_.size(); ++mi) {
    const auto& m = indices_[mi];
    double prod = coefficients_[static_cast<Index>(mi)];
    if (prod == 0.0) continue;
    for (int k = 0; k < dim_; ++k) prod *= table(m[static_cast<std::size_t>(k)], k);
    p += prod;
    if (grad) {
      for (int k = 0; k < dim_; ++k) {
        const int mk = m[static_cast<std::size_t>(k)];
        if (mk == 0) continue;
        double dprod = coefficients_[static_cast<Index>(mi)];
        for (int l = 0; l < dim_; ++l) {
          const int ml = m[static_cast<std::size_t>(l)];
          dprod *= (l == k) ? std::sqrt(double(ml)) * table(ml - 1, l) : table(ml, l);
        }
        (*grad)[k] += dprod;
      }
    }
  }
  return p;
}

double KernelEmbeddingDensity::density(const Eigen::Ref<const Vector>& x) const {
  Vector xw;
  whiten(x, xw);
  const double q = std::pow(2.0 * std::numbers::pi, -0.5 * dim_) *
                   std::exp(-0.5 * xw.squaredNorm());
  return polynomial(xw, nullptr) * q * std::exp(-log_det_);
}

std::optional<Vector> KernelEmbeddingDensity::score(const Eigen::Ref<const Vector>& x) const {
  Vector xw;
  whiten(x, xw);
  Vector grad_p;
  const double p = polynomial(xw, &grad_p);
  const double q = std::pow(2.0 * std::numbers::pi, -0.5 * dim_) *
                   std::exp(-0.5 * xw.squaredNorm());
  if (p * q * std::exp(-log_det_) < clip_threshold_) return std::nullopt;
  // grad_x log(P q / det L) = L^{-T} (grad P / P - x').
  Vector sw = grad_p / p - xw;
  return Vector(chol_inv_.transpose() * sw);
}

Vector KernelEmbeddingDensity::score_floored(const Eigen::Ref<const Vector>& x,
                                             bool* floored) const {
  Vector xw;
  whiten(x, xw);
  Vector grad_p;
  const double p = polynomial(xw, &grad_p);
  // Floor on the polynomial factor keeps the Gaussian tail score -x' intact.
  const double q = std::pow(2.0 * std::numbers::pi, -0.5 * dim_) * std::exp(-0.5 * xw.squaredNorm());
  const double p_floor = clip_threshold_ > 0.0
                             ? clip_threshold_ * std::exp(log_det_) / std::max(q, 1e-300)
                             : 1e-8;
  const bool active = !(p > p_floor);
  if (floored) *floored = active;
  const double p_eff = active ? p_floor : p;
  Vector sw = (active ? Vector(Vector::Zero(dim_)) : Vector(grad_p / p_eff)) - xw;
  return chol_inv_.transpose() * sw;
}

double KernelEmbeddingDensity::rkhs_norm_squared() const {
  double acc = 0.0;
  for (std::size_t mi = 0; mi < indices_.size(); ++mi) {
    int total = 0;
    for (int v : indices_[mi]) total += v;
    acc += coefficients_[static_cast<Index>(mi)] * coefficients_[static_cast<Index>(mi)] /
           std::pow(rho_, double(total));
  }
  return acc;
}

KernelEmbeddingDensity kernel_embedding_fit(const Matrix& samples, int order, double rho,
                                            bool whiten) {
  const Index t = samples.rows();
  const auto dim = static_cast<int>(samples.cols());

  KernelEmbeddingDensity d;
  d.dim_ = dim;
  d.order_ = order;
  d.rho_ = rho;
  d.indices_ = multi_indices(dim, order);
  if (t < 10 * static_cast<Index>(d.indices_.size())) {
    std::ostringstream msg;
    msg << "kernel_embedding_fit: " << t << " samples for " << d.indices_.size()
        << " coefficients (need 10x)";
    throw NumericalError(msg.str());
  }

  d.mean_ = whiten ? Vector(samples.colwise().mean()) : Vector(Vector::Zero(dim));
  if (whiten) {
    Matrix centered = samples.rowwise() - d.mean_.transpose();
    Matrix cov = centered.transpose() * centered / double(t - 1);
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success)
      throw NumericalError("kernel_embedding_fit: singular sample covariance");
    d.chol_ = llt.matrixL();
  } else {
    d.chol_ = Matrix::Identity(dim, dim);
  }
  d.chol_inv_ = d.chol_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim, dim));
  d.log_det_ = d.chol_.diagonal().array().log().sum();

  // f_m = mean over whitened samples of prod_k psi_{m_k}(x'_k).
  const auto n_idx = static_cast<Index>(d.indices_.size());
  Vector acc = Vector::Zero(n_idx);
  Matrix table(order + 1, dim);
  Vector xw(dim);
  for (Index n = 0; n < t; ++n) {
    d.whiten(samples.row(n).transpose(), xw);
    for (int k = 0; k < dim; ++k) hermite_table(order, xw[k], table.col(k));
    for (Index mi = 0; mi < n_idx; ++mi) {
      double prod = 1.0;
      const auto& m = d.indices_[static_cast<std::size_t>(mi)];
      for (int k = 0; k < dim; ++k) prod *= table(m[static_cast<std::size_t>(k)], k);
      acc[mi] += prod;
    }
  }
  d.coefficients_ = acc / double(t);
  d.coefficients_[0] = 1.0;  // psi_0 == 1 exactly

  // Clip threshold from the maximum density over (a subsample of) the data.
  double max_density = 0.0;
  const Index step = std::max<Index>(1, t / 20000);
  for (Index n = 0; n < t; n += step)
    max_density = std::max(max_density, d.density(samples.row(n).transpose()));
  d.clip_threshold_ = 1e-4 * max_density;
  return d;
}

KernelEmbeddingDensity kernel_embedding_from_coefficients(int dim, int order,
                                                          const Vector& coefficients,
                                                          const Vector& mean,
                                                          const Matrix& whitening_factor,
                                                          double rho) {
  KernelEmbeddingDensity d;
  d.dim_ = dim;
  d.order_ = order;
  d.rho_ = rho;
  d.indices_ = multi_indices(dim, order);
  if (coefficients.size() != static_cast<Index>(d.indices_.size()))
    throw NumericalError("kernel_embedding_from_coefficients: coefficient count mismatch");
  if (std::abs(coefficients[0] - 1.0) > 1e-12)
    throw NumericalError("kernel_embedding_from_coefficients: f_0 must be 1");
  d.coefficients_ = coefficients;
  d.mean_ = mean;
  d.chol_ = whitening_factor;
  d.chol_inv_ = d.chol_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim, dim));
  d.log_det_ = d.chol_.diagonal().array().log().sum();
  d.clip_threshold_ = 0.0;
  return d;
}

}  // namespace respfit::density
