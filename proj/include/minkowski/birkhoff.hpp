#pragma once

#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace minkowski {

struct OrthogonalityReport {
  bool holds = false;
  // |L(x)(y)| / (||x|| ||y||); the relation holds iff residual <= eq_tol.
  double residual = 0.0;
  // Minimizer of t -> ||x + t y|| found by the line search.
  double witness_t = 0.0;
  // ||x|| - min_t ||x + t y|| >= 0, from the line search. Zero (up to
  // rounding) exactly when the relation holds.
  double variational_gap = 0.0;
};

struct LineSearchWitness {
  double t;
  double gap;
};

// Independent variational check: golden-section minimization of
// ||x + t y|| over t in [-2||x||/||y||, 2||x||/||y||].
LineSearchWitness birkhoff_line_search(const Norm& N, const Vector& x, const Vector& y);

// x is Birkhoff left-orthogonal to y. Decided algebraically through
// L(x)(y) = 0; the line search fills witness_t and variational_gap.
OrthogonalityReport birkhoff_vv(const Norm& N, const Vector& x, const Vector& y,
                                const Tolerances& tol = {});

// x is Birkhoff left-orthogonal to every vector of the (linear) hyperplane h.
// Checked on a basis of h. The report carries the worst basis vector.
OrthogonalityReport birkhoff_vh(const Norm& N, const Vector& x, const Hyperplane& h,
                                const Tolerances& tol = {});

// The unit vector orthogonal (on the left) to h, oriented so that h's normal
// functional is positive on it.
Vector left_orthogonal_direction(const Norm& N, const Hyperplane& h, const Tolerances& tol = {});

}  // namespace minkowski
