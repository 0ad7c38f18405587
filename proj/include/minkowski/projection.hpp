#pragma once

#include <optional>

#include "minkowski/bodies.hpp"
#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace minkowski {

struct ProjectionResult {
  Vector point;
  double distance = 0.0;
  // Conditional-gradient duality gap L(x - p)(s - p) at the returned point,
  // s = argmax_K L(x - p). Upper bound on the suboptimality of ||x - p||^2 / 2.
  double gap = 0.0;
  int iterations = 0;
  // (x - p) / distance; absent when x is in K.
  std::optional<Vector> outer_normal;
  // gap <= max(opt_gap * min(1, distance^2), floor) was reached, where
  // floor = 64 eps (1 + |x|_inf) width(K) |J_L(x - p)|_inf is the level at
  // which rounding in L(x - p) swamps the gap (width(K) the largest
  // coordinate extent of K, J_L the Jacobian of L).
  bool certified = true;
  // x lies within 100 eq_tol of the boundary of K (either side).
  bool boundary_band = false;
};

// Metric projection p_K(x) for a smooth, strictly convex norm.
//
// Minimizes y -> rho(x - y)^2 / 2 over K by conditional gradient with exact
// line search; the linear subproblem at y is argmax_K L(x - y). Polytopes use
// away steps and finish with a Newton solve on the face the iterates settle
// on; balls in a different norm finish with a Newton solve over the boundary.
// Balls in the ambient norm and parallel bodies of the ambient norm are
// handled in closed form.
ProjectionResult project(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol = {});

double distance(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol = {});

// The norm gradient of d_K at x: the outer normal (x - p_K(x)) / d_K(x)
// outside K, zero in the interior. Throws NonDifferentiableError in the
// boundary band.
Vector distance_gradient(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol = {});

// Re-projects p_K(x) + t eta_K(x) and reports whether the projection is still
// p_K(x) (within 10 eq_tol in N).
bool sun_check(const Norm& N, const ConvexBody& K, const Vector& x, double t, const Tolerances& tol = {});

// For u in NC(K, z) with ||u|| = 1, checks that L(u) supports K + delta B at
// z + delta u, on argmax points of 256 seeded random functionals plus
// argmax(L(u)).
bool parallel_normal_check(const Norm& N, const ConvexBody& K, const Vector& z, const Vector& u, double delta,
                           const Tolerances& tol = {}, std::uint64_t seed = 0);

}  // namespace minkowski
