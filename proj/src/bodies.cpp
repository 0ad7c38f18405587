#include "minkowski/bodies.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

#include "minkowski/legendre.hpp"
#include "minkowski/projection.hpp"
#include "minkowski/random.hpp"

namespace minkowski {

namespace {

constexpr double kMaxFacetCandidates = 5e6;

double binomial(int m, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

// Brute-force facet enumeration: every n-subset of vertices spanning a
// hyperplane that leaves all vertices on one side yields a facet.
void enumerate_facets(body_kind::Polytope& P, int n) {
  const int m = static_cast<int>(P.vertices.size());
  double scale = 1.0;
  for (const Vector& v : P.vertices) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  const double side_tol = 1e-10 * scale;

  if (binomial(m, n) > kMaxFacetCandidates) {
    throw DomainError("too many vertices for facet enumeration in this dimension");
  }

  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
  std::vector<std::vector<int>> members;

  std::vector<int> combo(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) combo[static_cast<std::size_t>(i)] = i;
  Eigen::MatrixXd system(n, n + 1);
  while (true) {
    for (int r = 0; r < n; ++r) {
      system.row(r).head(n) = P.vertices[static_cast<std::size_t>(combo[static_cast<std::size_t>(r)])].transpose();
      system(r, n) = -1.0;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      Eigen::VectorXd k = lu.kernel().col(0);
      Eigen::VectorXd a = k.head(n);
      double b = k(n);
      const double an = a.norm();
      if (an > 1e-14) {
        a /= an;
        b /= an;
        int above = 0;
        int below = 0;
        for (const Vector& v : P.vertices) {
          const double s = a.dot(v) - b;
          if (s > side_tol) ++above;
          if (s < -side_tol) ++below;
        }
        if (above == 0 || below == 0) {
          if (above > 0) {
            a = -a;
            b = -b;
          }
          bool duplicate = false;
          for (std::size_t f = 0; f < normals.size(); ++f) {
            if ((normals[f] - a).norm() < 1e-9 && std::abs(offsets[f] - b) < 1e-9 * scale) {
              duplicate = true;
              break;
            }
          }
          if (!duplicate) {
            std::vector<int> on;
            for (int j = 0; j < m; ++j) {
              if (std::abs(a.dot(P.vertices[static_cast<std::size_t>(j)]) - b) <= side_tol) on.push_back(j);
            }
            normals.push_back(a);
            offsets.push_back(b);
            members.push_back(std::move(on));
          }
        }
      }
    }
    // next combination in lexicographic order
    int i = n - 1;
    while (i >= 0 && combo[static_cast<std::size_t>(i)] == m - n + i) --i;
    if (i < 0) break;
    ++combo[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) combo[static_cast<std::size_t>(j)] = combo[static_cast<std::size_t>(j - 1)] + 1;
  }

  P.facet_normals.resize(static_cast<Eigen::Index>(normals.size()), n);
  P.facet_offsets.resize(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t f = 0; f < normals.size(); ++f) {
    P.facet_normals.row(static_cast<Eigen::Index>(f)) = normals[f].transpose();
    P.facet_offsets(static_cast<Eigen::Index>(f)) = offsets[f];
  }
  P.facet_vertices = std::move(members);
}

}  // namespace

ConvexBody ConvexBody::polytope(std::vector<Vector> vertices, const Tolerances& tol) {
  tol.validate();
  if (vertices.empty()) throw DomainError("polytope needs vertices");
  const int n = static_cast<int>(vertices.front().size());
  if (n < 1) throw DomainError("polytope dimension must be >= 1");
  for (const Vector& v : vertices) {
    require_dimension(n, static_cast<int>(v.size()), "polytope vertex");
    require_finite(v, "polytope vertex");
  }
  if (static_cast<int>(vertices.size()) < n + 1) {
    throw DomainError("a full-dimensional polytope needs at least n+1 vertices");
  }
  Eigen::MatrixXd diffs(n, static_cast<Eigen::Index>(vertices.size() - 1));
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    diffs.col(static_cast<Eigen::Index>(i - 1)) = vertices[i] - vertices[0];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(diffs);
  lu.setThreshold(1e-10);
  if (lu.rank() != n) throw DomainError("polytope vertices are affinely degenerate (empty interior)");

  body_kind::Polytope P;
  P.vertices = std::move(vertices);
  enumerate_facets(P, n);
  return ConvexBody(n, std::make_shared<const BodyKind>(std::move(P)), tol);
}

ConvexBody ConvexBody::ball(Vector center, double radius, Norm norm, const Tolerances& tol) {
  tol.validate();
  require_dimension(norm.dimension(), static_cast<int>(center.size()), "ball center");
  require_finite(center, "ball center");
  if (!(radius > 0) || !std::isfinite(radius)) throw DomainError("ball radius must be positive");
  const int n = norm.dimension();
  return ConvexBody(n, std::make_shared<const BodyKind>(body_kind::Ball{std::move(center), radius, std::move(norm)}),
                    tol);
}

ConvexBody ConvexBody::parallel(const ConvexBody& base, double delta, Norm norm, const Tolerances& tol) {
  tol.validate();
  require_dimension(base.dimension(), norm.dimension(), "parallel body norm");
  if (!(delta > 0) || !std::isfinite(delta)) throw DomainError("parallel body needs delta > 0");
  return ConvexBody(base.dimension(),
                    std::make_shared<const BodyKind>(
                        body_kind::Parallel{std::make_shared<const ConvexBody>(base), delta, std::move(norm)}),
                    tol);
}

double ConvexBody::slack(const Vector& x) const {
  require_dimension(dim_, static_cast<int>(x.size()), "body point");
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, body_kind::Polytope>) {
          return (k.facet_offsets - k.facet_normals * x).minCoeff();
        } else if constexpr (std::is_same_v<K, body_kind::Ball>) {
          return k.radius - k.norm(x - k.center);
        } else {
          return k.delta - distance(k.norm, *k.base, x, tol_);
        }
      },
      *kind_);
}

double ConvexBody::support(const Functional& phi) const {
  require_dimension(dim_, phi.dimension(), "support functional");
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, body_kind::Polytope>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const Vector& v : k.vertices) best = std::max(best, phi(v));
          return best;
        } else if constexpr (std::is_same_v<K, body_kind::Ball>) {
          return phi(k.center) + k.radius * dual_norm(k.norm, phi, tol_);
        } else {
          return k.base->support(phi) + k.delta * dual_norm(k.norm, phi, tol_);
        }
      },
      *kind_);
}

Vector ConvexBody::argmax(const Functional& phi) const {
  require_dimension(dim_, phi.dimension(), "argmax functional");
  return std::visit(
      [&](const auto& k) -> Vector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, body_kind::Polytope>) {
          std::size_t best = 0;
          double best_value = phi(k.vertices[0]);
          for (std::size_t i = 1; i < k.vertices.size(); ++i) {
            const double value = phi(k.vertices[i]);
            if (value > best_value) {
              best = i;
              best_value = value;
            }
          }
          return k.vertices[best];
        } else if constexpr (std::is_same_v<K, body_kind::Ball>) {
          if (phi.is_zero()) return k.center;
          return k.center + k.radius * dual_maximizer(k.norm, phi, tol_);
        } else {
          Vector base_point = k.base->argmax(phi);
          if (phi.is_zero()) return base_point;
          return base_point + k.delta * dual_maximizer(k.norm, phi, tol_);
        }
      },
      *kind_);
}

Vector ConvexBody::center() const {
  return std::visit(
      [&](const auto& k) -> Vector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, body_kind::Polytope>) {
          Vector c = Vector::Zero(dim_);
          for (const Vector& v : k.vertices) c += v;
          return c / static_cast<double>(k.vertices.size());
        } else if constexpr (std::is_same_v<K, body_kind::Ball>) {
          return k.center;
        } else {
          return k.base->center();
        }
      },
      *kind_);
}

ConvexBody make_polytope(std::vector<Vector> vertices, const Tolerances& tol) {
  return ConvexBody::polytope(std::move(vertices), tol);
}

ConvexBody make_ball(Vector center, double radius, Norm N, const Tolerances& tol) {
  return ConvexBody::ball(std::move(center), radius, std::move(N), tol);
}

ConvexBody parallel_body(const ConvexBody& K, double delta, Norm N, const Tolerances& tol) {
  return ConvexBody::parallel(K, delta, std::move(N), tol);
}

bool on_boundary(const ConvexBody& K, const Vector& x) {
  if (!K.contains(x)) return false;
  const int n = K.dimension();
  const double eps = 10.0 * K.tolerances().eq_tol;
  std::vector<Vector> probes;
  for (int i = 0; i < n; ++i) {
    probes.push_back(Vector::Unit(n, i));
    probes.push_back(-Vector::Unit(n, i));
  }
  CounterRng rng(0x626f756eULL);
  for (int i = 0; i < 16; ++i) probes.push_back(rng.unit_vector(n));
  std::visit(
      [&](const auto& k) {
        using Kd = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<Kd, body_kind::Polytope>) {
          for (Eigen::Index j = 0; j < k.facet_normals.rows(); ++j) probes.push_back(k.facet_normals.row(j).transpose());
        } else if constexpr (std::is_same_v<Kd, body_kind::Ball>) {
          const Vector d = x - k.center;
          if (k.norm(d) > 0) probes.push_back(d / k.norm(d));
        } else {
          const ProjectionResult p = project(k.norm, *k.base, x, K.tolerances());
          if (p.outer_normal) probes.push_back(*p.outer_normal);
        }
      },
      K.kind());
  for (const Vector& r : probes) {
    if (!K.contains(x + eps * r)) return true;
  }
  return false;
}

NormalCone::NormalCone(ConvexBody body, Norm norm, Vector base_point, std::vector<Vector> generators)
    : body_(std::move(body)),
      norm_(std::move(norm)),
      base_point_(std::move(base_point)),
      generators_(std::move(generators)) {}

double NormalCone::membership_slack(const Vector& v) const {
  require_dimension(norm_.dimension(), static_cast<int>(v.size()), "normal cone probe");
  const double nv = norm_(v);
  if (nv == 0.0) return 0.0;
  const Functional phi = legendre(norm_, v);
  return (body_.support(phi) - phi(base_point_)) / nv;
}

bool NormalCone::contains(const Vector& v) const {
  return membership_slack(v) <= body_.tolerances().eq_tol;
}

NormalCone normal_cone(const ConvexBody& K, const Vector& x, const Norm& N) {
  require_dimension(K.dimension(), N.dimension(), "normal cone norm");
  if (!on_boundary(K, x)) throw DomainError("normal_cone: point is not on the boundary of the body");
  const Tolerances& tol = K.tolerances();
  std::vector<Vector> generators;
  auto pull_back = [&](const Functional& phi) {
    Vector g = legendre_inverse(N, phi, tol);
    generators.push_back(g / N(g));
  };
  std::visit(
      [&](const auto& k) {
        using Kd = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<Kd, body_kind::Polytope>) {
          for (Eigen::Index j = 0; j < k.facet_normals.rows(); ++j) {
            if (k.facet_offsets(j) - k.facet_normals.row(j).dot(x) <= 10.0 * tol.eq_tol) {
              pull_back(Functional(k.facet_normals.row(j).transpose()));
            }
          }
        } else if constexpr (std::is_same_v<Kd, body_kind::Ball>) {
          pull_back(norm_grad(k.norm, x - k.center));
        } else {
          const ProjectionResult p = project(k.norm, *k.base, x, tol);
          if (p.outer_normal) pull_back(legendre(k.norm, *p.outer_normal));
        }
      },
      K.kind());
  return NormalCone(K, N, x, std::move(generators));
}

}  // namespace minkowski
