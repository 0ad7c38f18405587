#include "minkowski/subdifferential.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkowski/legendre.hpp"
#include "minkowski/projection.hpp"
#include "minkowski/random.hpp"

namespace minkowski {

namespace {

using Sublinear = std::function<double(const Vector&)>;

// Step of the nested one-sided differences in subgradient_construct.
constexpr double kLevelStep = 1e-2;
// Below this asymmetry a level of the chain is treated as linear.
constexpr double kLinearityTol = 1e-6;
// Base step of g_0 in subgradient_construct for finite-difference oracles.
constexpr double kConstructBaseStep = 1e-4;
// Perturbation along e_m relative to the facet clearance (polytope d_K chain).
constexpr double kConeStepFraction = 1e-3;
// Quotient step relative to the clearance of a chain point.
constexpr double kQuotientFraction = 1e-2;
// Relative offset from a facet through x below which a chain point is put on it.
constexpr double kSnapFraction = 1e-6;

double piece_value(const AffinePiece& p, const Vector& x) { return p.phi(x) + p.b; }

// Richardson table for a one-sided difference quotient on a halving ladder.
double extrapolate_one_sided(const std::function<double(double)>& quotient, double h, int levels) {
  std::vector<double> row(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) row[static_cast<std::size_t>(j)] = quotient(h * std::ldexp(1.0, -j));
  for (int k = 1; k < levels; ++k) {
    const double factor = std::ldexp(1.0, k) - 1.0;
    for (int j = levels - 1; j >= k; --j) {
      auto& r = row[static_cast<std::size_t>(j)];
      r = r + (r - row[static_cast<std::size_t>(j - 1)]) / factor;
    }
  }
  return row.back();
}

double fd_dir_deriv(const std::function<double(const Vector&)>& f, const Vector& x, const Vector& v, double fx,
                    double fd_step) {
  const double scale = v.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return 0.0;
  auto quotient = [&](double t) { return (f(x + t * v) - fx) / t; };
  return extrapolate_one_sided(quotient, fd_step / scale, 4);
}

// Distance from x to the nearest facet hyperplane not passing through x
// (within the 100 eq_tol boundary band).
double facet_clearance(const body_kind::Polytope& P, const Vector& x, const Tolerances& tol) {
  const double band = 100.0 * tol.eq_tol * (1.0 + x.lpNorm<Eigen::Infinity>());
  const Eigen::VectorXd room = P.facet_offsets - P.facet_normals * x;
  double clearance = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < room.size(); ++j)
    if (room(j) > band) clearance = std::min(clearance, room(j));
  return clearance;
}

Vector normalized(const Norm& N, const Vector& v) {
  const double r = N(v);
  return r > 0.0 ? Vector(v / r) : v;
}

// Coefficients of a (numerically) linear map from symmetric evaluations.
Functional linear_coefficients(const Sublinear& g, int n) {
  Eigen::VectorXd c(n);
  for (int k = 0; k < n; ++k) {
    const Vector e = Vector::Unit(n, k);
    c(k) = 0.5 * (g(e) - g(-e));
  }
  return Functional(c);
}

bool looks_linear(const Sublinear& g, int n, double tol) {
  for (int k = 0; k < n; ++k) {
    const Vector e = Vector::Unit(n, k);
    const double a = g(e);
    const double b = g(-e);
    if (std::abs(a + b) > tol * (1.0 + std::max(std::abs(a), std::abs(b)))) return false;
  }
  return true;
}

// e_1 = u / |u|_2, completed by the coordinate axes with the largest residual
// against the span built so far.
std::vector<Vector> completed_basis(const Vector& u) {
  const int n = static_cast<int>(u.size());
  std::vector<Vector> basis{u / u.norm()};
  std::vector<Vector> ortho{basis.front()};
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (static_cast<int>(basis.size()) < n) {
    int best = -1;
    double best_norm = -1.0;
    Vector best_residual;
    for (int k = 0; k < n; ++k) {
      if (used[static_cast<std::size_t>(k)]) continue;
      Vector r = Vector::Unit(n, k);
      for (const Vector& q : ortho) r -= q.dot(r) * q;
      if (r.norm() > best_norm + 1e-12) {
        best = k;
        best_norm = r.norm();
        best_residual = r;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    basis.push_back(Vector::Unit(n, best));
    ortho.push_back(best_residual / best_norm);
  }
  return basis;
}

// psi in conv{phi_i : i in S}? Enumerates affinely independent subsets of
// size <= n + 1 (Caratheodory) and solves the equality-constrained least
// squares problem for barycentric weights on each. Empty when too many
// pieces are active for enumeration.
std::optional<bool> in_convex_hull(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXd& psi,
                                   double tol) {
  const int m = static_cast<int>(points.size());
  const int n = static_cast<int>(psi.size());
  if (m == 0) return false;
  if (m > 20) return std::nullopt;
  const int max_size = std::min(m, n + 1);
  std::vector<int> idx;
  bool found = false;
  std::function<void(int)> recurse = [&](int start) {
    if (found) return;
    if (!idx.empty()) {
      const int k = static_cast<int>(idx.size());
      // psi = p_0 + sum_{j>=1} lambda_j (p_j - p_0)
      const Eigen::VectorXd& p0 = points[static_cast<std::size_t>(idx[0])];
      Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
      double residual;
      if (k == 1) {
        residual = (psi - p0).norm();
      } else {
        Eigen::MatrixXd D(n, k - 1);
        for (int j = 1; j < k; ++j) D.col(j - 1) = points[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])] - p0;
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
        if (qr.rank() < k - 1) {
          residual = std::numeric_limits<double>::infinity();
        } else {
          const Eigen::VectorXd mu = qr.solve(psi - p0);
          residual = (D * mu + p0 - psi).norm();
          lambda.resize(k);
          lambda(0) = 1.0 - mu.sum();
          lambda.tail(k - 1) = mu;
        }
      }
      if (residual <= tol && lambda.minCoeff() >= -tol) {
        found = true;
        return;
      }
    }
    if (static_cast<int>(idx.size()) == max_size) return;
    for (int i = start; i < m && !found; ++i) {
      idx.push_back(i);
      recurse(i + 1);
      idx.pop_back();
    }
  };
  recurse(0);
  return found;
}

double default_margin_tol(const ConvexFunction& f) { return 10.0 * f.tolerances().eq_tol; }

}  // namespace

ConvexFunction ConvexFunction::max_affine(std::vector<AffinePiece> pieces) {
  if (pieces.empty()) throw DomainError("max-affine function needs at least one piece");
  const int n = pieces.front().phi.dimension();
  for (const auto& p : pieces) {
    require_dimension(n, p.phi.dimension(), "max-affine piece");
    require_finite(p.phi.coeffs(), "max-affine piece");
    if (!std::isfinite(p.b)) throw DomainError("max-affine offset must be finite");
  }
  return ConvexFunction(n, std::make_shared<const FunctionKind>(function_kind::MaxAffine{std::move(pieces)}), {});
}

ConvexFunction ConvexFunction::distance_to(ConvexBody body, Norm norm, const Tolerances& tol) {
  require_dimension(body.dimension(), norm.dimension(), "distance function norm");
  tol.validate();
  const int n = body.dimension();
  return ConvexFunction(
      n, std::make_shared<const FunctionKind>(function_kind::DistanceToBody{std::move(body), std::move(norm)}), tol);
}

ConvexFunction ConvexFunction::smooth(int dim, std::function<double(const Vector&)> evaluate,
                                      std::function<double(const Vector&, const Vector&)> derivative,
                                      const Tolerances& tol) {
  if (dim < 1) throw DimensionError("dimension must be positive");
  if (!evaluate) throw DomainError("smooth function needs an evaluate callback");
  tol.validate();
  return ConvexFunction(
      dim, std::make_shared<const FunctionKind>(function_kind::Smooth{std::move(evaluate), std::move(derivative)}),
      tol);
}

ConvexFunction ConvexFunction::norm_function(const Norm& N) {
  auto eval = [N](const Vector& x) { return N(x); };
  auto deriv = [N](const Vector& x, const Vector& v) {
    if (x.norm() < 1e-10) return N(v);
    return norm_grad(N, x)(v);
  };
  return smooth(N.dimension(), eval, deriv, N.tolerances());
}

ConvexFunction ConvexFunction::half_squared_norm(const Norm& N) {
  auto eval = [N](const Vector& x) {
    const double r = N(x);
    return 0.5 * r * r;
  };
  auto deriv = [N](const Vector& x, const Vector& v) { return legendre(N, x)(v); };
  return smooth(N.dimension(), eval, deriv, N.tolerances());
}

double ConvexFunction::operator()(const Vector& x) const {
  require_dimension(dim_, static_cast<int>(x.size()), "function argument");
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, function_kind::MaxAffine>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& p : k.pieces) best = std::max(best, piece_value(p, x));
          return best;
        } else if constexpr (std::is_same_v<K, function_kind::DistanceToBody>) {
          return distance(k.norm, k.body, x, tol_);
        } else {
          return k.evaluate(x);
        }
      },
      *kind_);
}

std::vector<int> active_pieces(const function_kind::MaxAffine& f, const Vector& x, double eq_tol) {
  std::vector<double> values;
  values.reserve(f.pieces.size());
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : f.pieces) {
    values.push_back(piece_value(p, x));
    best = std::max(best, values.back());
  }
  const double cut = best - eq_tol * (1.0 + std::abs(best));
  std::vector<int> active;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] >= cut) active.push_back(static_cast<int>(i));
  return active;
}

double dir_deriv_plus(const ConvexFunction& f, const Vector& x, const Vector& v) {
  require_dimension(f.dimension(), static_cast<int>(x.size()), "point");
  require_dimension(f.dimension(), static_cast<int>(v.size()), "direction");
  if (v.isZero(0.0)) return 0.0;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, function_kind::MaxAffine>) {
          double best = -std::numeric_limits<double>::infinity();
          for (int i : active_pieces(k, x, f.tolerances().eq_tol))
            best = std::max(best, k.pieces[static_cast<std::size_t>(i)].phi(v));
          return best;
        } else if constexpr (std::is_same_v<K, function_kind::Smooth>) {
          if (k.derivative) return k.derivative(x, v);
          return fd_dir_deriv(k.evaluate, x, v, k.evaluate(x), f.tolerances().fd_step);
        } else {
          // A polytope coincides with x + T_K(x) near x in K, so d_K(x + t v) / t
          // is exact once t v stays clear of the facets inactive at x.
          if (const auto* P = std::get_if<body_kind::Polytope>(&k.body.kind());
              P != nullptr && k.body.contains(x)) {
            const double t = f.tolerances().fd_step / v.lpNorm<Eigen::Infinity>();
            if (t * v.norm() <= 1e-3 * facet_clearance(*P, x, f.tolerances())) return f(Vector(x + t * v)) / t;
          }
          // Off K the nearest point is unique, so d_K'(x, v) = d(rho)_{x - p}(v).
          const ProjectionResult r = project(k.norm, k.body, x, f.tolerances());
          if (r.outer_normal && r.certified && !r.boundary_band) return norm_grad(k.norm, Vector(x - r.point))(v);
          auto eval = [&](const Vector& y) { return f(y); };
          return fd_dir_deriv(eval, x, v, r.distance, f.tolerances().fd_step);
        }
      },
      f.kind());
}

double dir_deriv_minus(const ConvexFunction& f, const Vector& x, const Vector& v) {
  return -dir_deriv_plus(f, x, -v);
}

bool is_differentiable_at(const ConvexFunction& f, const Vector& x) {
  const int n = f.dimension();
  const double tol = 10.0 * f.tolerances().eq_tol;
  for (int k = 0; k < n; ++k) {
    const Vector e = Vector::Unit(n, k);
    if (std::abs(dir_deriv_plus(f, x, e) + dir_deriv_plus(f, x, -e)) > tol) return false;
  }
  return true;
}

Vector norm_gradient(const ConvexFunction& f, const Vector& x, const Norm& N) {
  require_dimension(f.dimension(), N.dimension(), "norm");
  const int n = f.dimension();
  const double tol = 10.0 * f.tolerances().eq_tol;
  Eigen::VectorXd c(n);
  for (int k = 0; k < n; ++k) {
    const Vector e = Vector::Unit(n, k);
    const double plus = dir_deriv_plus(f, x, e);
    const double minus = dir_deriv_plus(f, x, -e);
    if (std::abs(plus + minus) > tol)
      throw NonDifferentiableError(
          "function is not differentiable at the point; use subgradient_member or subgradient_construct");
    c(k) = 0.5 * (plus - minus);
  }
  if (c.norm() <= f.tolerances().eq_tol * 1e-3) return Vector::Zero(n);
  return legendre_inverse(N, Functional(c), N.tolerances());
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::member:
      return "member";
    case Verdict::non_member:
      return "non-member";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

SubgradientTester::SubgradientTester(ConvexFunction f, Vector x, Norm N, int m_dirs, std::uint64_t seed)
    : f_(std::move(f)), x_(std::move(x)), norm_(std::move(N)), m_dirs_(m_dirs) {
  require_dimension(f_.dimension(), static_cast<int>(x_.size()), "point");
  require_dimension(f_.dimension(), norm_.dimension(), "norm");
  if (m_dirs < 1) throw DomainError("m_dirs must be positive");
  const int n = f_.dimension();
  directions_ = sphere_sample(norm_, m_dirs, seed).points;
  for (int k = 0; k < n; ++k) {
    directions_.push_back(normalized(norm_, Vector::Unit(n, k)));
    directions_.push_back(normalized(norm_, -Vector::Unit(n, k)));
  }
  // Edges of the tangent cone of a polytope at x: the worst violation of a
  // candidate outside the normal cone is attained on one of them.
  if (const auto* d = std::get_if<function_kind::DistanceToBody>(&f_.kind())) {
    if (const auto* P = std::get_if<body_kind::Polytope>(&d->body.kind())) {
      for (const Vector& y : P->vertices) {
        const Vector r = y - x_;
        if (r.norm() > 1e-9 * (1.0 + x_.norm())) directions_.push_back(normalized(norm_, r));
      }
    }
  }
  derivatives_.reserve(directions_.size());
  for (const Vector& u : directions_) derivatives_.push_back(dir_deriv_plus(f_, x_, u));
}

SubgradientCertificate SubgradientTester::test(const Vector& v, std::optional<double> margin_tol) const {
  require_dimension(f_.dimension(), static_cast<int>(v.size()), "candidate");
  const double tol = margin_tol.value_or(default_margin_tol(f_));
  SubgradientCertificate cert;
  cert.point = x_;
  cert.candidate = v;
  const Functional Lv = legendre(norm_, v);
  cert.margin = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& u, double fu) {
    const double m = fu - Lv(u);
    if (m < cert.margin) {
      cert.margin = m;
      cert.worst_direction = u;
    }
  };
  for (std::size_t i = 0; i < directions_.size(); ++i) consider(directions_[i], derivatives_[i]);
  if (!v.isZero(0.0)) {
    const Vector u = normalized(norm_, v);
    consider(u, dir_deriv_plus(f_, x_, u));
  }
  if (cert.margin < -tol)
    cert.verdict = Verdict::non_member;
  else
    cert.verdict = m_dirs_ >= 64 ? Verdict::member : Verdict::inconclusive;

  if (const auto* ma = std::get_if<function_kind::MaxAffine>(&f_.kind())) {
    std::vector<Eigen::VectorXd> slopes;
    for (int i : active_pieces(*ma, x_, f_.tolerances().eq_tol))
      slopes.push_back(ma->pieces[static_cast<std::size_t>(i)].phi.coeffs());
    cert.exact = in_convex_hull(slopes, Lv.coeffs(), tol * (1.0 + Lv.coeffs().norm()));
    if (cert.exact) cert.verdict = *cert.exact ? Verdict::member : Verdict::non_member;
  }
  return cert;
}

SubgradientCertificate subgradient_member(const ConvexFunction& f, const Vector& x, const Vector& v, const Norm& N,
                                          int m_dirs, std::uint64_t seed, std::optional<double> margin_tol) {
  return SubgradientTester(f, x, N, m_dirs, seed).test(v, margin_tol);
}

SublinearChain subgradient_construct_chain(const ConvexFunction& f, const Vector& x, const Vector& u, const Norm& N) {
  const int n = f.dimension();
  require_dimension(n, static_cast<int>(x.size()), "point");
  require_dimension(n, static_cast<int>(u.size()), "direction");
  require_dimension(n, N.dimension(), "norm");
  if (u.norm() < 1e-300) throw DomainError("subgradient_construct needs u != 0");

  SublinearChain chain;
  chain.basis = completed_basis(u);
  const bool exact = std::holds_alternative<function_kind::MaxAffine>(f.kind());
  const double eq_tol = f.tolerances().eq_tol;

  if (exact) {
    const auto& ma = std::get<function_kind::MaxAffine>(f.kind());
    auto make_g = [&f](std::vector<int> active) -> Sublinear {
      return [keep = f, active](const Vector& v) {
        const auto& pieces = std::get<function_kind::MaxAffine>(keep.kind()).pieces;
        double best = -std::numeric_limits<double>::infinity();
        for (int i : active) best = std::max(best, pieces[static_cast<std::size_t>(i)].phi(v));
        return best;
      };
    };
    std::vector<int> active = active_pieces(ma, x, eq_tol);
    chain.g.push_back(make_g(active));
    for (int m = 0; m < n; ++m) {
      const Vector& e = chain.basis[static_cast<std::size_t>(m)];
      double best = -std::numeric_limits<double>::infinity();
      for (int i : active) best = std::max(best, ma.pieces[static_cast<std::size_t>(i)].phi(e));
      std::vector<int> next;
      for (int i : active)
        if (ma.pieces[static_cast<std::size_t>(i)].phi(e) >= best - eq_tol * (1.0 + std::abs(best))) next.push_back(i);
      active = std::move(next);
      chain.g.push_back(make_g(active));
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (int i : active) c += ma.pieces[static_cast<std::size_t>(i)].phi.coeffs();
    chain.linear = Functional(c / static_cast<double>(active.size()));
  } else if (const auto* dk = std::get_if<function_kind::DistanceToBody>(&f.kind());
             dk != nullptr && std::holds_alternative<body_kind::Polytope>(dk->body.kind()) && dk->body.contains(x)) {
    // Near a point of K a polytope is the cone x + T_K(x), so g_m = f'(x_m, .)
    // with x_m = x_{m-1} + s_m e_m, s_m a small fraction of the clearance of
    // the facets inactive at x_{m-1}. For generic u, x_1 already lies off the
    // boundary of x + T_K(x) and g_1 is linear.
    const auto& P = std::get<body_kind::Polytope>(dk->body.kind());
    const ConvexFunction fc = f;
    // The chain points sit at tiny, exactly known offsets from facets, well
    // inside the boundary band, so the generic oracle is replaced: off K the
    // projection is exact to rounding; on K the quotient step is a fraction of
    // the distance to the nearest facet hyperplane not through the point.
    const Norm dnorm = dk->norm;
    const ConvexBody body = dk->body;
    auto derivative_at = [fc, P, dnorm, body](const Vector& p) -> Sublinear {
      const double round = 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + p.lpNorm<Eigen::Infinity>());
      const ProjectionResult r = project(dnorm, body, p, fc.tolerances());
      if (r.distance > round && r.certified) {
        const Vector w = p - r.point;
        const Functional g = norm_grad(dnorm, Vector(w / w.lpNorm<Eigen::Infinity>()));
        return [g](const Vector& v) { return g(v); };
      }
      const Eigen::VectorXd room = P.facet_offsets - P.facet_normals * p;
      double clearance = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < room.size(); ++j)
        if (room(j) > round) clearance = std::min(clearance, room(j));
      clearance = std::min(clearance, 1.0 + p.lpNorm<Eigen::Infinity>());
      const double fp = r.distance;
      return [fc, p, clearance, fp](const Vector& v) {
        const double scale = v.norm();
        if (scale == 0.0) return 0.0;
        const double t = kQuotientFraction * clearance / scale;
        return (fc(Vector(p + t * v)) - fp) / t;
      };
    };
    // Facets through x. A chain point barely off one of them is moved onto
    // it, which shifts the max formula by about kSnapFraction.
    const double band = 100.0 * f.tolerances().eq_tol * (1.0 + x.lpNorm<Eigen::Infinity>());
    const Eigen::VectorXd room_x = P.facet_offsets - P.facet_normals * x;
    auto snap = [&](const Vector& z) -> Vector {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index j = 0; j < room_x.size(); ++j) {
        const double c = std::abs(P.facet_normals.row(j).dot(z));
        if (room_x(j) <= band && c > 0.0 && c <= kSnapFraction * P.facet_normals.row(j).norm() * z.norm())
          rows.push_back(j);
      }
      if (rows.empty()) return z;
      Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
      for (std::size_t i = 0; i < rows.size(); ++i) A.row(static_cast<Eigen::Index>(i)) = P.facet_normals.row(rows[i]);
      return z - A.completeOrthogonalDecomposition().solve(A * z);
    };
    Vector xm = x;
    Sublinear g = derivative_at(xm);
    chain.g.push_back(g);
    for (int m = 0; m < n; ++m) {
      if (!looks_linear(g, n, kLinearityTol)) {
        const Vector& e = chain.basis[static_cast<std::size_t>(m)];
        const double clearance = std::min(facet_clearance(P, xm, f.tolerances()), 1.0 + xm.lpNorm<Eigen::Infinity>());
        xm = x + snap(Vector(xm - x + kConeStepFraction * clearance / e.norm() * e));
        g = derivative_at(xm);
      }
      chain.g.push_back(g);
    }
    chain.linear = linear_coefficients(g, n);
  } else {
    // Nested differences amplify the noise of g_0 by about 1 / kLevelStep per
    // level, so g_0 uses a coarser base step than dir_deriv_plus.
    const ConvexFunction fc = f;
    const Vector xc = x;
    const double fx = f(x);
    // Derivative callbacks and d_K off the boundary band are exact.
    const bool has_callback = [&] {
      if (const auto* s = std::get_if<function_kind::Smooth>(&f.kind())) return static_cast<bool>(s->derivative);
      if (const auto* d = std::get_if<function_kind::DistanceToBody>(&f.kind())) {
        const ProjectionResult r = project(d->norm, d->body, x, f.tolerances());
        return r.outer_normal.has_value() && r.certified && !r.boundary_band;
      }
      return false;
    }();
    const double base_step = kConstructBaseStep;
    Sublinear g = [fc, xc, fx, has_callback, base_step](const Vector& v) {
      if (has_callback) return dir_deriv_plus(fc, xc, v);
      auto eval = [&](const Vector& y) { return fc(y); };
      return fd_dir_deriv(eval, xc, v, fx, base_step);
    };
    chain.g.push_back(g);
    for (int m = 0; m < n; ++m) {
      if (!looks_linear(g, n, kLinearityTol)) {
        const Vector e = chain.basis[static_cast<std::size_t>(m)];
        const double ge = g(e);
        const Sublinear prev = g;
        // A noise-free g_0 affords a deeper Richardson table.
        const int levels = has_callback ? 4 : 2;
        g = [prev, e, ge, levels](const Vector& v) {
          const double scale = v.lpNorm<Eigen::Infinity>();
          if (scale == 0.0) return 0.0;
          auto quotient = [&](double t) { return (prev(e + t * v) - ge) / t; };
          return extrapolate_one_sided(quotient, kLevelStep / scale, levels);
        };
      }
      chain.g.push_back(g);
    }
    chain.linear = linear_coefficients(g, n);
  }

  chain.subgradient =
      chain.linear.coeffs().norm() == 0.0 ? Vector(Vector::Zero(n)) : legendre_inverse(N, chain.linear, N.tolerances());

  // Post-hoc verification.
  const double tol = exact ? 10.0 * eq_tol : kConstructTolerance;
  const double fu = dir_deriv_plus(f, x, u);
  const double Lwu = legendre(N, chain.subgradient)(u);
  if (std::abs(Lwu - fu) > tol * std::max(1.0, std::abs(fu)))
    throw ConvergenceError("subgradient_construct: max-formula check failed (L(w)u = " + std::to_string(Lwu) +
                               ", f'+(x,u) = " + std::to_string(fu) + ")",
                           std::abs(Lwu - fu));
  const auto cert = subgradient_member(f, x, chain.subgradient, N, 64, 0, exact ? std::nullopt : std::optional(tol));
  if (cert.verdict != Verdict::member)
    throw ConvergenceError("subgradient_construct: membership check failed (margin " + std::to_string(cert.margin) +
                               ")",
                           cert.margin);
  return chain;
}

Vector subgradient_construct(const ConvexFunction& f, const Vector& x, const Vector& u, const Norm& N) {
  return subgradient_construct_chain(f, x, u, N).subgradient;
}

EstimateReport estimate_check(const ConvexFunction& f, const Vector& x, const Vector& v, const Norm& N, int m,
                              std::uint64_t seed) {
  const int n = f.dimension();
  require_dimension(n, static_cast<int>(x.size()), "point");
  require_dimension(n, static_cast<int>(v.size()), "vector");
  require_dimension(n, N.dimension(), "norm");
  if (v.norm() < 1e-300) throw DomainError("estimate_check needs v != 0");
  if (m < 1) throw DomainError("estimate_check needs m >= 1");

  const Functional Lv = legendre(N, v);
  const double rv = N(v);
  EstimateReport rep;
  rep.lower = rv * rv;
  rep.sup_minus = -std::numeric_limits<double>::infinity();
  rep.inf_plus = std::numeric_limits<double>::infinity();

  const std::vector<Vector> h = n > 1 ? kernel_basis(Lv) : std::vector<Vector>{};
  CounterRng rng(seed, 0x657374ULL);
  for (int s = 0; s < m; ++s) {
    Vector z = Vector::Zero(n);
    if (!h.empty()) {
      for (const Vector& b : h) z += rng.normal() * b;
      z = normalized(N, z) * rv * std::pow(10.0, rng.uniform(-2.0, 1.0));
    }
    const Vector d = v + z;
    rep.sup_minus = std::max(rep.sup_minus, dir_deriv_minus(f, x, d));
    rep.inf_plus = std::min(rep.inf_plus, dir_deriv_plus(f, x, d));
  }
  const double tol = 10.0 * f.tolerances().eq_tol * std::max(1.0, rep.lower);
  rep.slack = std::min(rep.lower - rep.sup_minus, rep.inf_plus - rep.lower);
  rep.holds = rep.sup_minus <= rep.lower + tol && rep.lower <= rep.inf_plus + tol;
  return rep;
}

}  // namespace minkowski
