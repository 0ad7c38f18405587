#pragma once

#include <Eigen/Core>

#include <memory>
#include <variant>
#include <vector>

#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace minkowski {

class ConvexBody;

namespace body_kind {

// Convex hull of the vertices. Facets (unit outer normals a_j and offsets
// b_j, so the body is {y : a_j . y <= b_j}) are enumerated at construction.
struct Polytope {
  std::vector<Vector> vertices;
  Eigen::MatrixXd facet_normals;  // one unit normal per row
  Eigen::VectorXd facet_offsets;
  std::vector<std::vector<int>> facet_vertices;
};

struct Ball {
  Vector center;
  double radius;
  Norm norm;
};

// K + delta B, with B the unit ball of `norm`.
struct Parallel {
  std::shared_ptr<const ConvexBody> base;
  double delta;
  Norm norm;
};

}  // namespace body_kind

using BodyKind = std::variant<body_kind::Polytope, body_kind::Ball, body_kind::Parallel>;

// Compact convex set with nonempty interior, exposed through membership,
// support function and linear maximization oracles. Immutable.
class ConvexBody {
 public:
  // Throws DomainError unless the vertices affinely span R^n.
  static ConvexBody polytope(std::vector<Vector> vertices, const Tolerances& tol = {});
  static ConvexBody ball(Vector center, double radius, Norm norm, const Tolerances& tol = {});
  static ConvexBody parallel(const ConvexBody& base, double delta, Norm norm, const Tolerances& tol = {});

  int dimension() const { return dim_; }
  const BodyKind& kind() const { return *kind_; }
  const Tolerances& tolerances() const { return tol_; }

  // Signed depth: positive inside, zero on the boundary, negative outside.
  // Euclidean distance to the nearest facet hyperplane for polytopes, radius
  // minus gauge distance for balls, delta minus distance to the base for
  // parallel bodies.
  double slack(const Vector& x) const;
  bool contains(const Vector& x) const { return slack(x) >= -tol_.eq_tol; }

  double support(const Functional& phi) const;
  // Maximizer of phi over the body. For polytopes, ties go to the lowest
  // vertex index.
  Vector argmax(const Functional& phi) const;

  // A point well inside the body (vertex centroid, ball center).
  Vector center() const;

 private:
  ConvexBody(int dim, std::shared_ptr<const BodyKind> kind, Tolerances tol)
      : dim_(dim), kind_(std::move(kind)), tol_(tol) {}
  int dim_;
  std::shared_ptr<const BodyKind> kind_;
  Tolerances tol_;
};

ConvexBody make_polytope(std::vector<Vector> vertices, const Tolerances& tol = {});
ConvexBody make_ball(Vector center, double radius, Norm N, const Tolerances& tol = {});
ConvexBody parallel_body(const ConvexBody& K, double delta, Norm N, const Tolerances& tol = {});

// True when x is in K and one of the probes x + 10 eq_tol r leaves K, with r
// running over the coordinate directions, their negatives, a fixed set of
// random directions and (for polytopes) the facet normals.
bool on_boundary(const ConvexBody& K, const Vector& x);

// The Birkhoff normal cone NC(K, x) at a boundary point.
class NormalCone {
 public:
  NormalCone(ConvexBody body, Norm norm, Vector base_point, std::vector<Vector> generators);

  const Vector& base_point() const { return base_point_; }
  // Unit outer normals spanning the cone.
  const std::vector<Vector>& generators() const { return generators_; }

  // (support_K(L(v)) - L(v)(x)) / ||v||: nonpositive exactly on the cone.
  // Zero for v = 0.
  double membership_slack(const Vector& v) const;
  bool contains(const Vector& v) const;

 private:
  ConvexBody body_;
  Norm norm_;
  Vector base_point_;
  std::vector<Vector> generators_;
};

// Throws DomainError unless on_boundary(K, x).
NormalCone normal_cone(const ConvexBody& K, const Vector& x, const Norm& N);

}  // namespace minkowski
