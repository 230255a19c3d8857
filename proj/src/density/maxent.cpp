#include "respfit/density/maxent.hpp"

#include "respfit/density/hermite.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <sstream>

namespace respfit::density {

namespace {

double monomial(const Eigen::Ref<const Vector>& x, const std::vector<int>& e) {
  double v = 1.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    for (int p = 0; p < e[k]; ++p) v *= x[static_cast<Index>(k)];
  return v;
}

// Tensor quadrature grid over the box; phi is n_nodes x n_basis, log_w the
// log-weights.
struct QuadratureTable {
  Matrix phi;
  Vector log_w;
  Matrix nodes;  // n_nodes x dim
};

QuadratureTable build_table(int dim, const std::vector<std::vector<int>>& basis,
                            const Vector& lo, const Vector& hi, int nodes_per_axis) {
  std::vector<QuadratureRule> axis(static_cast<std::size_t>(dim));
  Index total = 1;
  for (int k = 0; k < dim; ++k) {
    axis[static_cast<std::size_t>(k)] = gauss_legendre(nodes_per_axis, lo[k], hi[k]);
    total *= nodes_per_axis;
  }
  QuadratureTable table;
  table.phi.resize(total, static_cast<Index>(basis.size()));
  table.log_w.resize(total);
  table.nodes.resize(total, dim);
  Vector x(dim);
  for (Index n = 0; n < total; ++n) {
    Index rem = n;
    double log_w = 0.0;
    for (int k = 0; k < dim; ++k) {
      const Index i = rem % nodes_per_axis;
      rem /= nodes_per_axis;
      x[k] = axis[static_cast<std::size_t>(k)].nodes[i];
      log_w += std::log(axis[static_cast<std::size_t>(k)].weights[i]);
    }
    table.nodes.row(n) = x;
    table.log_w[n] = log_w;
    for (std::size_t a = 0; a < basis.size(); ++a)
      table.phi(n, static_cast<Index>(a)) = monomial(x, basis[a]);
  }
  return table;
}

struct DualState {
  double log_z;
  Vector moments;          // E_lambda[phi]
  Matrix basis_covariance;  // Cov_lambda[phi]
};

DualState evaluate_dual(const QuadratureTable& table, const Vector& lambda,
                        bool with_hessian) {
  // log-sum-exp stabilized quadrature of Z = int exp(-lambda . phi).
  Vector log_terms = table.log_w - table.phi * lambda;
  const double shift = log_terms.maxCoeff();
  Vector w = (log_terms.array() - shift).exp();
  const double wsum = w.sum();

  DualState s;
  s.log_z = shift + std::log(wsum);
  w /= wsum;
  s.moments = table.phi.transpose() * w;
  if (with_hessian) {
    Matrix centered = table.phi.rowwise() - s.moments.transpose();
    s.basis_covariance =
        centered.transpose() * w.asDiagonal() * centered;
  }
  return s;
}

// Index of the highest pure even power of each variable present in the
// basis; empty optional when a direction has none.
std::vector<int> coercive_indices(int dim, const std::vector<std::vector<int>>& basis) {
  std::vector<int> out(static_cast<std::size_t>(dim), -1);
  std::vector<int> best(static_cast<std::size_t>(dim), 0);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    const auto& e = basis[a];
    int nonzero = -1;
    bool pure = true;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] != 0) {
        if (nonzero >= 0) pure = false;
        nonzero = static_cast<int>(k);
      }
    }
    if (!pure || nonzero < 0) continue;
    const int p = e[static_cast<std::size_t>(nonzero)];
    if (p % 2 == 0 && p > best[static_cast<std::size_t>(nonzero)]) {
      best[static_cast<std::size_t>(nonzero)] = p;
      out[static_cast<std::size_t>(nonzero)] = static_cast<int>(a);
    }
  }
  return out;
}

bool coercive(const Vector& lambda, const std::vector<int>& idx) {
  for (int a : idx)
    if (a >= 0 && lambda[a] <= 0.0) return false;
  return true;
}

}  // namespace

double ExponentialFamilyDensity::log_density(const Eigen::Ref<const Vector>& x) const {
  double expo = 0.0;
  for (std::size_t a = 0; a < basis_.size(); ++a)
    expo += lambda_[static_cast<Index>(a)] * monomial(x, basis_[a]);
  return -expo - log_z_;
}

double ExponentialFamilyDensity::density(const Eigen::Ref<const Vector>& x) const {
  return std::exp(log_density(x));
}

std::optional<Vector> ExponentialFamilyDensity::score(const Eigen::Ref<const Vector>& x) const {
  Vector g = Vector::Zero(dim_);
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    const auto& e = basis_[a];
    for (int k = 0; k < dim_; ++k) {
      const int p = e[static_cast<std::size_t>(k)];
      if (p == 0) continue;
      double d = double(p) * lambda_[static_cast<Index>(a)];
      for (std::size_t l = 0; l < e.size(); ++l) {
        const int q = (static_cast<int>(l) == k) ? e[l] - 1 : e[l];
        for (int r = 0; r < q; ++r) d *= x[static_cast<Index>(l)];
      }
      g[k] -= d;
    }
  }
  return g;
}

Vector ExponentialFamilyDensity::moments() const {
  QuadratureTable table = build_table(dim_, basis_, box_lo_, box_hi_, nodes_per_axis_);
  return evaluate_dual(table, lambda_, false).moments;
}

ExponentialFamilyDensity maxent_fit(const Vector& targets,
                                    const std::vector<std::vector<int>>& basis, int dim,
                                    const MaxentOptions& opts) {
  if (targets.size() != static_cast<Index>(basis.size()))
    throw NumericalError("maxent_fit: target/basis size mismatch");
  QuadratureTable table = build_table(dim, basis, opts.box_lo, opts.box_hi,
                                      opts.nodes_per_axis);
  const auto idx = coercive_indices(dim, basis);

  Vector lambda;
  if (opts.initial_lambda.size() > 0) {
    lambda = opts.initial_lambda;
  } else {
    // Gaussian-ish start: 1/(2 var) on pure quadratic terms when the target
    // provides them, zero elsewhere.
    lambda = Vector::Zero(static_cast<Index>(basis.size()));
    for (std::size_t a = 0; a < basis.size(); ++a) {
      const auto& e = basis[a];
      int nonzero = -1, count = 0;
      for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] != 0) { nonzero = static_cast<int>(k); count += e[k]; }
      bool pure_square = (count == 2 && nonzero >= 0 &&
                          e[static_cast<std::size_t>(nonzero)] == 2);
      if (pure_square && targets[static_cast<Index>(a)] > 0.0)
        lambda[static_cast<Index>(a)] = 0.5 / targets[static_cast<Index>(a)];
    }
    if (!coercive(lambda, idx))
      for (int a : idx)
        if (a >= 0 && lambda[a] <= 0.0) lambda[a] = 1e-3;
  }

  auto dual_value = [&](const DualState& s, const Vector& l) {
    return s.log_z + l.dot(targets);
  };

  DualState state = evaluate_dual(table, lambda, true);
  double dual = dual_value(state, lambda);
  const double target_scale = std::max(1.0, targets.cwiseAbs().maxCoeff());

  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    Vector grad = targets - state.moments;
    if (grad.cwiseAbs().maxCoeff() <= opts.tol * target_scale) break;

    // Newton direction from the (PSD) basis covariance, with a small ridge
    // escape hatch for nearly dependent bases.
    Matrix h = state.basis_covariance;
    Eigen::LDLT<Matrix> ldlt(h);
    Vector step = ldlt.solve(grad);
    if (!step.allFinite()) {
      h.diagonal().array() += 1e-10 * h.diagonal().maxCoeff();
      step = Eigen::LDLT<Matrix>(h).solve(grad);
    }

    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      Vector cand = lambda - alpha * step;
      if (coercive(cand, idx)) {
        DualState cand_state = evaluate_dual(table, cand, true);
        const double cand_dual = dual_value(cand_state, cand);
        if (cand_dual <= dual + 1e-14 * std::abs(dual)) {
          lambda = cand;
          state = std::move(cand_state);
          dual = cand_dual;
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
  }

  Vector resid = targets - state.moments;
  if (resid.cwiseAbs().maxCoeff() > opts.tol * target_scale) {
    std::ostringstream msg;
    msg << "maxent_fit: no convergence in " << iter
        << " iterations; max moment residual " << resid.cwiseAbs().maxCoeff();
    throw NumericalError(msg.str());
  }

  ExponentialFamilyDensity d;
  d.dim_ = dim;
  d.basis_ = basis;
  d.lambda_ = lambda;
  d.log_z_ = state.log_z;
  d.box_lo_ = opts.box_lo;
  d.box_hi_ = opts.box_hi;
  d.nodes_per_axis_ = opts.nodes_per_axis;

  if (opts.moment_covariance.size() > 0) {
    // lambda = lambda(mu): d lambda / d mu = -H^{-1}; Var(lambda) =
    // H^{-1} Var(mu) H^{-1}.
    Eigen::LDLT<Matrix> ldlt(state.basis_covariance);
    Matrix hinv_v = ldlt.solve(opts.moment_covariance);
    Matrix var = ldlt.solve(hinv_v.transpose()).transpose();
    d.coefficient_stderr_ = var.diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return d;
}

ExponentialFamilyDensity exp_family_from_coefficients(
    int dim, const std::vector<std::vector<int>>& basis, const Vector& lambda,
    const Vector& box_lo, const Vector& box_hi, int nodes_per_axis) {
  ExponentialFamilyDensity d;
  d.dim_ = dim;
  d.basis_ = basis;
  d.lambda_ = lambda;
  d.box_lo_ = box_lo;
  d.box_hi_ = box_hi;
  d.nodes_per_axis_ = nodes_per_axis;
  QuadratureTable table = build_table(dim, basis, box_lo, box_hi, nodes_per_axis);
  d.log_z_ = evaluate_dual(table, lambda, false).log_z;
  return d;
}

}  // namespace respfit::density
