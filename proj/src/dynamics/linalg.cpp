#include "respfit/dynamics/linalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace respfit::dynamics {

Matrix lyapunov_solve(const Matrix& a, const Matrix& q) {
  const Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n)
    throw NumericalError("lyapunov_solve: dimension mismatch");

  // vec is column-stacking: vec(A S) = (I (x) A) vec(S), vec(S A^T) = (A (x) I) vec(S).
  Matrix k = Matrix::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j) k.block(j * n, j * n, n, n) = a;
  for (Index bi = 0; bi < n; ++bi)
    for (Index bj = 0; bj < n; ++bj)
      for (Index r = 0; r < n; ++r)
        k(bi * n + r, bj * n + r) += a(bi, bj);

  Vector rhs(n * n);
  for (Index j = 0; j < n; ++j) rhs.segment(j * n, n) = -q.col(j);

  Eigen::FullPivLU<Matrix> lu(k);
  if (!lu.isInvertible())
    throw NumericalError("lyapunov_solve: singular Kronecker system (A not Hurwitz?)");
  Vector vec_s = lu.solve(rhs);

  Matrix s(n, n);
  for (Index j = 0; j < n; ++j) s.col(j) = vec_s.segment(j * n, n);
  s = 0.5 * (s + s.transpose()).eval();

  const double qn = q.norm();
  const double resid = (a * s + s * a.transpose() + q).norm();
  if (qn > 0.0 && resid > 1e-10 * qn) {
    std::ostringstream msg;
    msg << "lyapunov_solve: residual " << resid << " exceeds tolerance for |Q|=" << qn;
    throw NumericalError(msg.str());
  }
  return s;
}

Matrix exact_autocovariance(const Matrix& a, const Matrix& sigma, double t) {
  return (t * a).exp() * sigma;
}

Matrix cholesky_spd(const Matrix& m) {
  const Index n = m.rows();
  if (m.cols() != n) throw NumericalError("cholesky_spd: matrix not square");
  const double scale = std::max(1.0, m.norm());
  if ((m - m.transpose()).norm() > 1e-12 * scale)
    throw NumericalError("cholesky_spd: matrix not symmetric to 1e-12");

  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = m(j, j) - l.row(j).head(j).squaredNorm();
    if (d <= 0.0) {
      std::ostringstream msg;
      msg << "cholesky_spd: non-positive pivot " << d << " at index " << j;
      throw NumericalError(msg.str());
    }
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      double s = m(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

}  // namespace respfit::dynamics
