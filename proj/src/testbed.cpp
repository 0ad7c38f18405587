#include "minkowski/testbed.hpp"

#include <cmath>
#include <numbers>

namespace minkowski::testbed {

std::vector<NamedNorm> builtin_norms(int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) A(i, i) = (i + 1.0) * (i + 1.0);
  return {{"euclidean", Norm::euclidean(n)},
          {"p1.5", Norm::p_norm(1.5, n)},
          {"p4", Norm::p_norm(4.0, n)},
          {"ellipsoid", Norm::ellipsoidal(A)}};
}

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

}  // namespace

std::vector<NamedBody> polytopes(int n) {
  std::vector<NamedBody> out;
  if (n == 2) {
    out.push_back({"square", ConvexBody::polytope({vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})})});
    std::vector<Vector> pent;
    for (int k = 0; k < 5; ++k) {
      const double a = 2.0 * std::numbers::pi * k / 5.0 + 0.3;
      pent.push_back(vec({0.5 + 1.5 * std::cos(a), -0.25 + std::sin(a)}));
    }
    out.push_back({"pentagon", ConvexBody::polytope(pent)});
  } else if (n == 3) {
    std::vector<Vector> cube;
    for (int m = 0; m < 8; ++m) cube.push_back(vec({m & 1 ? 1.0 : -1.0, m & 2 ? 1.0 : -1.0, m & 4 ? 1.0 : -1.0}));
    out.push_back({"cube", ConvexBody::polytope(cube)});
    out.push_back({"simplex", ConvexBody::polytope({vec({0, 0, 0}), vec({2, 0, 0}), vec({0, 1.5, 0}), vec({0, 0, 1})})});
  } else if (n == 5) {
    std::vector<Vector> cross;
    for (int i = 0; i < 5; ++i) {
      cross.push_back(Vector::Unit(5, i));
      cross.push_back(-Vector::Unit(5, i));
    }
    out.push_back({"cross5", ConvexBody::polytope(cross)});
  }
  return out;
}

std::vector<NamedBody> bodies(int n, const Norm& N) {
  std::vector<NamedBody> out = polytopes(n);
  if (n == 2) {
    out.push_back({"ball", ConvexBody::ball(vec({0.5, 0.0}), 1.0, Norm::euclidean(2))});
    out.push_back({"parallel", ConvexBody::parallel(out.front().body, 0.5, N)});
  }
  return out;
}

double bounding_radius(const ConvexBody& K) {
  const int n = K.dimension();
  const Vector c = K.center();
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Functional e(Vector::Unit(n, i));
    const double hi = K.support(e) - c(i);
    const double lo = K.support(-e) + c(i);
    r2 += std::pow(std::max(hi, lo), 2);
  }
  return std::sqrt(r2);
}

Vector exterior_point(const ConvexBody& K, CounterRng& rng, double lo, double hi) {
  const double R = bounding_radius(K);
  return K.center() + rng.unit_vector(K.dimension()) * R * rng.uniform(lo, hi);
}

Vector sample_body(const ConvexBody& K, CounterRng& rng) {
  const int n = K.dimension();
  return std::visit(
      [&](const auto& k) -> Vector {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, body_kind::Polytope>) {
          // Dirichlet-like weights, sharpened so that boundary regions get hit.
          Eigen::VectorXd w(static_cast<Eigen::Index>(k.vertices.size()));
          for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = std::pow(-std::log(std::max(rng.uniform(), 1e-300)), 3.0);
          w /= w.sum();
          Vector y = Vector::Zero(n);
          for (Eigen::Index i = 0; i < w.size(); ++i) y += w(i) * k.vertices[static_cast<std::size_t>(i)];
          return y;
        } else if constexpr (std::is_same_v<T, body_kind::Ball>) {
          const Vector u = rng.unit_vector(n);
          return k.center + u / k.norm(u) * k.radius * std::pow(rng.uniform(), 1.0 / n);
        } else {
          const Vector u = rng.unit_vector(n);
          return sample_body(*k.base, rng) + u / k.norm(u) * k.delta * std::pow(rng.uniform(), 1.0 / n);
        }
      },
      K.kind());
}

Vector random_vector(int n, CounterRng& rng, double lo, double hi) {
  return rng.unit_vector(n) * std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

ConvexFunction random_max_affine(int n, int pieces, int active, const Vector& x0, CounterRng& rng) {
  std::vector<AffinePiece> out;
  for (int i = 0; i < pieces; ++i) {
    const Functional phi(rng.normal_vector(n));
    const double drop = i < active ? 0.0 : rng.uniform(0.1, 2.0);
    out.push_back({phi, -phi(x0) - drop});
  }
  return ConvexFunction::max_affine(std::move(out));
}

}  // namespace minkowski::testbed
