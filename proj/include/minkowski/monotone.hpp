#pragma once

#include <utility>
#include <vector>

#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"
#include "minkowski/subdifferential.hpp"

namespace minkowski {

struct MonotonePair {
  Vector x;
  Vector w;
};

struct MonotoneData {
  std::vector<MonotonePair> pairs;
  int base_index = 0;

  int dimension() const { return pairs.empty() ? 0 : static_cast<int>(pairs.front().x.size()); }
  // Throws DomainError / DimensionError on empty data, mismatched dimensions
  // or an out-of-range base index.
  void validate() const;
};

struct MonotoneReport {
  bool ok = false;
  // A positive cycle when !ok; otherwise the heaviest cycle through the base
  // pair. Indices are listed once, in traversal order.
  std::vector<int> worst_cycle;
  // Total weight of worst_cycle.
  double slack = 0.0;
};

// Edge weight c_ij = L(w_i)(x_j - x_i) of the chain digraph.
double chain_weight(const MonotoneData& S, const Norm& N, int i, int j);

// Weight of the closed walk c[0] -> c[1] -> ... -> c[0].
double cycle_weight(const MonotoneData& S, const Norm& N, const std::vector<int>& cycle);

// Norm cyclic monotonicity: no cycle of the complete digraph with weights
// c_ij has positive total weight (longest-path relaxation, |S| rounds).
MonotoneReport cyclic_monotone_check(const MonotoneData& S, const Norm& N, const Tolerances& tol = {});

// The max-affine potential f(x) = max_i [V_i + L(w_i)(x - x_i)], V_i the
// longest chain weight from the base pair to i. f(x_base) = 0 and
// w_i is a norm sub-gradient of f at x_i. Throws MonotonicityError carrying a
// positive cycle when S is not cyclically monotone.
ConvexFunction rockafellar_potential(const MonotoneData& S, const Norm& N, const Tolerances& tol = {});

}  // namespace minkowski
