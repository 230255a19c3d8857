#include "respfit/estimation/levmar.hpp"

#include "respfit/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace respfit::estimation {

namespace {

bool eval_with_jacobian(const ResidualFn& fn, const ParameterSpace& space,
                        const Vector& theta, double fd_step, Vector& r, Matrix& jac) {
  if (fn(theta, r, &jac) && jac.size() > 0) return true;
  // Forward differences, nudged inward at the box edge.
  if (!fn(theta, r, nullptr)) return false;
  jac.resize(r.size(), theta.size());
  Vector rp;
  for (Index k = 0; k < theta.size(); ++k) {
    double h = fd_step * std::max(1.0, std::abs(theta[k]));
    Vector tp = theta;
    if (tp[k] + h > space.hi[k]) h = -h;
    tp[k] += h;
    if (!fn(tp, rp, nullptr)) return false;
    jac.col(k) = (rp - r) / h;
  }
  return true;
}

}  // namespace

LevMarResult levenberg_marquardt(const ResidualFn& fn, const ParameterSpace& space,
                                 const Vector& start, const LevMarOptions& opts) {
  LevMarResult res;
  Vector theta = start.cwiseMax(space.lo).cwiseMin(space.hi);
  if (!space.feasible(theta)) return res;

  Vector r;
  Matrix jac;
  if (!eval_with_jacobian(fn, space, theta, opts.fd_step, r, jac)) return res;
  double cost = r.squaredNorm();
  double mu = opts.initial_mu * (jac.transpose() * jac).diagonal().maxCoeff();
  if (!(mu > 0.0)) mu = opts.initial_mu;

  res.theta = theta;
  res.cost = cost;
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    res.iterations = iter + 1;
    Matrix h = jac.transpose() * jac;
    Vector g = jac.transpose() * r;
    if (g.cwiseAbs().maxCoeff() < 1e-14) {
      res.converged = true;
      break;
    }

    bool stepped = false;
    for (int tries = 0; tries < 40; ++tries) {
      Matrix damped = h;
      damped.diagonal().array() += mu;
      Vector step = Eigen::LDLT<Matrix>(damped).solve(g);
      Vector cand = (theta - step).cwiseMax(space.lo).cwiseMin(space.hi);
      Vector cand_r;
      Matrix cand_jac;
      if (space.feasible(cand) &&
          eval_with_jacobian(fn, space, cand, opts.fd_step, cand_r, cand_jac)) {
        const double cand_cost = cand_r.squaredNorm();
        if (cand_cost < cost) {
          const double step_size = (cand - theta).norm();
          theta = cand;
          r = std::move(cand_r);
          jac = std::move(cand_jac);
          const double improvement = cost - cand_cost;
          cost = cand_cost;
          mu = std::max(mu * 0.3, 1e-16);
          stepped = true;
          res.theta = theta;
          res.cost = cost;
          if (improvement < opts.tol_cost * std::max(1.0, cost) ||
              step_size < opts.tol_step) {
            res.converged = true;
          }
          break;
        }
      }
      mu *= 4.0;
    }
    if (!stepped || res.converged) {
      res.converged = res.converged || !stepped;
      break;
    }
  }
  return res;
}

Matrix latin_hypercube(const ParameterSpace& space, Index count, std::uint64_t seed) {
  const Index dim = space.dim();
  GaussianStream rng(seed);
  Matrix pts(count, dim);

  auto fill = [&](Eigen::Ref<Matrix> block) {
    const Index n = block.rows();
    for (Index k = 0; k < dim; ++k) {
      std::vector<Index> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), Index{0});
      std::shuffle(perm.begin(), perm.end(), rng.engine());
      for (Index i = 0; i < n; ++i) {
        const double u = (double(perm[static_cast<std::size_t>(i)]) + rng.uniform()) / double(n);
        block(i, k) = space.lo[k] + u * (space.hi[k] - space.lo[k]);
      }
    }
  };
  fill(pts);

  // Resample rows violating the structural constraints.
  for (Index i = 0; i < count; ++i) {
    int guard = 0;
    while (!space.feasible(pts.row(i).transpose()) && guard++ < 10000) {
      for (Index k = 0; k < dim; ++k)
        pts(i, k) = space.lo[k] + rng.uniform() * (space.hi[k] - space.lo[k]);
    }
    if (guard >= 10000)
      throw NumericalError("latin_hypercube: could not find feasible points");
  }
  return pts;
}

MultistartResult minimize_multistart(const ResidualFn& fn, const ParameterSpace& space,
                                     Index count, std::uint64_t seed,
                                     const LevMarOptions& opts) {
  Matrix starts = latin_hypercube(space, count, seed);
  MultistartResult out;
  out.n_starts = count;
  for (Index i = 0; i < count; ++i) {
    LevMarResult r = levenberg_marquardt(fn, space, starts.row(i).transpose(), opts);
    if (r.theta.size() == 0) continue;
    ++out.n_converged;
    if (r.cost < out.best.cost) out.best = r;
  }
  if (out.best.theta.size() == 0)
    throw NumericalError("minimize_multistart: no feasible minimizer found");
  return out;
}

}  // namespace respfit::estimation
