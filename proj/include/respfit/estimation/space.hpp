#pragma once

#include "respfit/common.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace respfit::estimation {

// Free dynamical parameters with box bounds plus structural feasibility
// predicates (diagonal dominance, SPD blocks, positivity). Equilibrium
// parameters are pinned upstream and never enter this space.
struct ParameterSpace {
  std::vector<std::string> names;
  Vector lo, hi;
  std::vector<std::function<bool(const Eigen::Ref<const Vector>&)>> constraints;

  Index dim() const { return lo.size(); }
  bool in_box(const Eigen::Ref<const Vector>& theta) const {
    return (theta.array() >= lo.array()).all() && (theta.array() <= hi.array()).all();
  }
  bool feasible(const Eigen::Ref<const Vector>& theta) const {
    if (!in_box(theta)) return false;
    for (const auto& c : constraints)
      if (!c(theta)) return false;
    return true;
  }
};

// Symmetric circulant damping matrix with band (g0, g1, g2), zero beyond.
// Diagonal dominance g0 > 2(|g1|+|g2|) implies positive definiteness.
struct DampingMatrix {
  Index n_b = 0;
  double g0 = 0.0, g1 = 0.0, g2 = 0.0;

  bool diagonally_dominant() const { return g0 > 2.0 * (std::abs(g1) + std::abs(g2)); }
  Matrix dense() const;
};

}  // namespace respfit::estimation
