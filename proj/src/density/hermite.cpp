#include "respfit/density/hermite.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace respfit::density {

double hermite_eval(int order, double x) {
  if (order < 0) throw NumericalError("hermite_eval: negative order");
  double prev = 1.0;  // psi_0
  if (order == 0) return prev;
  double cur = x;  // psi_1
  for (int m = 1; m < order; ++m) {
    double next = (x * cur - std::sqrt(double(m)) * prev) / std::sqrt(double(m + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

double hermite_deriv(int order, double x) {
  if (order == 0) return 0.0;
  return std::sqrt(double(order)) * hermite_eval(order - 1, x);
}

void hermite_table(int max_order, double x, Eigen::Ref<Vector> out) {
  out[0] = 1.0;
  if (max_order == 0) return;
  out[1] = x;
  for (int m = 1; m < max_order; ++m)
    out[m + 1] = (x * out[m] - std::sqrt(double(m)) * out[m - 1]) / std::sqrt(double(m + 1));
}

double mehler_kernel(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                     double rho) {
  const auto d = static_cast<double>(x.size());
  const double r2 = 1.0 - rho * rho;
  const double quad = x.squaredNorm() + y.squaredNorm() - 2.0 * rho * x.dot(y);
  return std::pow(2.0 * std::numbers::pi, -d) * std::pow(r2, -0.5 * d) *
         std::exp(-quad / (2.0 * r2));
}

namespace {

void enumerate(int dim, int budget, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == dim) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= budget; ++k) {
    cur.push_back(k);
    enumerate(dim, budget - k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> multi_indices(int dim, int max_total_order) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  for (int total = 0; total <= max_total_order; ++total) {
    std::vector<std::vector<int>> level;
    enumerate(dim, total, cur, level);
    for (auto& m : level) {
      int sum = 0;
      for (int v : m) sum += v;
      if (sum == total) out.push_back(std::move(m));
    }
  }
  return out;
}

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu_0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const Vector& off_diag, double mu0) {
  const Index n = off_diag.size() + 1;
  Matrix jacobi = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = off_diag[i];
    jacobi(i + 1, i) = off_diag[i];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  Vector off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = double(k) / std::sqrt(4.0 * k * k - 1.0);
  QuadratureRule rule = golub_welsch(off, 2.0);
  // Affine map [-1,1] -> [a,b].
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  rule.nodes = (rule.nodes.array() * half + mid).matrix();
  rule.weights *= half;
  return rule;
}

QuadratureRule gauss_hermite(int n) {
  Vector off(n - 1);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(double(k));
  return golub_welsch(off, 1.0);
}

}  // namespace respfit::density
