#pragma once

#include <optional>

#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace minkowski {

// L(x) = rho(x) * d(rho)_x, with L(0) = 0.
Functional legendre(const Norm& N, const Vector& x);

// ||phi||_* = sup { phi(x) : ||x|| <= 1 }.
//
// Closed form for built-in norms (weighted p-norms dualize to weighted
// q-norms, ellipsoids to the inverse matrix). For custom norms the supremum is
// found by ascent on the unit sphere; throws ConvergenceError carrying the
// best lower bound if the optimality residual does not drop below opt_gap.
double dual_norm(const Norm& N, const Functional& phi, const Tolerances& tol = {});

// The unique x with L(x) = phi: x = ||phi||_* u where u maximizes phi on the
// unit sphere.
Vector legendre_inverse(const Norm& N, const Functional& phi, const Tolerances& tol = {});

// Maximizer of phi on the unit sphere of N (phi != 0).
Vector dual_maximizer(const Norm& N, const Functional& phi, const Tolerances& tol = {});

// The dual norm of a built-in norm, as a norm on the coefficient space of
// (R^n)*. Empty for custom norms.
std::optional<Norm> dual_of(const Norm& N);

// Legendre transform of the dual norm, L_*(phi), as an element of the bidual.
// Requires a built-in norm.
Bidual legendre_of_dual(const Norm& N, const Functional& phi);

struct LegendrePair {
  Vector primal;
  Functional dual;
};

LegendrePair make_legendre_pair(const Norm& N, const Vector& x);

}  // namespace minkowski
