#pragma once

#include <string>
#include <vector>

#include "minkowski/bodies.hpp"
#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"
#include "minkowski/random.hpp"
#include "minkowski/subdifferential.hpp"

namespace minkowski::testbed {

struct NamedNorm {
  std::string name;
  Norm norm;
};

struct NamedBody {
  std::string name;
  ConvexBody body;
};

inline constexpr int kDimensions[] = {2, 3, 5};

// euclidean, p = 1.5, p = 4 and the ellipsoid diag(1, 4, 9, ...).
std::vector<NamedNorm> builtin_norms(int n);

// square, pentagon (2D); cube, simplex (3D); cross-polytope (5D).
std::vector<NamedBody> polytopes(int n);

// polytopes(n) plus, in 2D, a euclidean ball and the parallel body of the
// square in N.
std::vector<NamedBody> bodies(int n, const Norm& N);

// Euclidean radius of a ball around K.center() containing K.
double bounding_radius(const ConvexBody& K);

// center + r u, u a uniform unit direction and r in [lo, hi] * bounding radius.
Vector exterior_point(const ConvexBody& K, CounterRng& rng, double lo = 1.2, double hi = 3.0);

// A random point of K (not uniform).
Vector sample_body(const ConvexBody& K, CounterRng& rng);

// Random nonzero vector with Euclidean norm log-uniform in [lo, hi].
Vector random_vector(int n, CounterRng& rng, double lo = 0.1, double hi = 10.0);

// max of `pieces` random affine functions, `active` of which are active at x0.
ConvexFunction random_max_affine(int n, int pieces, int active, const Vector& x0, CounterRng& rng);

}  // namespace minkowski::testbed
