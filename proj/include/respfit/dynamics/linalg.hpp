#pragma once

#include "respfit/common.hpp"

namespace respfit::dynamics {

// Solves A S + S A^T = -Q for symmetric S via Kronecker vectorization
//   (I (x) A + A (x) I) vec(S) = -vec(Q).
// Requires A Hurwitz (all eigenvalue real parts negative); the result is the
// stationary covariance of dX = A X dt + sqrt(Q) dW. Intended for the small
// dense systems used here (n <= 20).
Matrix lyapunov_solve(const Matrix& a, const Matrix& q);

// e^{tA} S; entry (i,j) is E[x_i(t) x_j(0)] for the linear SDE above with
// stationary covariance S.
Matrix exact_autocovariance(const Matrix& a, const Matrix& sigma, double t);

// Lower Cholesky factor of a symmetric positive definite matrix. Symmetry is
// checked to 1e-12 relative; a non-positive pivot aborts with its index.
Matrix cholesky_spd(const Matrix& m);

}  // namespace respfit::dynamics
