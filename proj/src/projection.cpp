#include "minkowski/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "minkowski/legendre.hpp"
#include "minkowski/random.hpp"

namespace minkowski {

namespace {

constexpr double kRefineFactor = 1e-6;
constexpr int kIterationsAfterCertificate = 25;
constexpr int kPolishEvery = 8;

double half_sq(const Norm& N, const Vector& w) {
  const double r = N(w);
  return 0.5 * r * r;
}

// L(w), the gradient of rho^2 / 2; zero within the singular radius of the origin.
Functional grad_half_sq(const Norm& N, const Vector& w) {
  if (w.norm() < 1e-10) return Functional::zero(static_cast<int>(w.size()));
  return legendre(N, w);
}

// Jacobian of L at w, i.e. the Hessian of rho^2 / 2.
Eigen::MatrixXd legendre_jacobian(const Norm& N, const Vector& w) {
  const int n = N.dimension();
  if (std::holds_alternative<norm_kind::Euclidean>(N.kind())) return Eigen::MatrixXd::Identity(n, n);
  if (const auto* e = std::get_if<norm_kind::Ellipsoidal>(&N.kind())) return e->A;
  // L_i = rho^(2-p) s_i with s_i = w_i |x_i|^(p-2) x_i.
  if (const auto* wp = std::get_if<norm_kind::WeightedP>(&N.kind());
      wp != nullptr && (wp->p >= 2.0 || (w.array() != 0.0).all())) {
    const double p = wp->p;
    const double rho = N(w);
    const Eigen::ArrayXd a = w.array().abs().pow(p - 2.0) * wp->weights.array();
    const Eigen::VectorXd s = (a * w.array()).matrix();
    Eigen::MatrixXd J = (2.0 - p) * std::pow(rho, 2.0 - 2.0 * p) * s * s.transpose();
    J.diagonal().array() += (p - 1.0) * std::pow(rho, 2.0 - p) * a;
    return J;
  }
  const double h = 1e-6 * (1.0 + w.lpNorm<Eigen::Infinity>());
  Eigen::MatrixXd J(n, n);
  Vector probe = w;
  for (int i = 0; i < n; ++i) {
    probe(i) = w(i) + h;
    const Eigen::VectorXd plus = grad_half_sq(N, probe).coeffs();
    probe(i) = w(i) - h;
    const Eigen::VectorXd minus = grad_half_sq(N, probe).coeffs();
    probe(i) = w(i);
    J.col(i) = (plus - minus) / (2.0 * h);
  }
  return 0.5 * (J + J.transpose());
}

// Exact line search for gamma -> rho(x - y - gamma d)^2 / 2 on [0, gmax] by
// bisection on the sign of the derivative -L(x - y - gamma d)(d), which is
// nondecreasing in gamma.
double line_search(const Norm& N, const Vector& x, const Vector& y, const Vector& d, double gmax) {
  auto slope = [&](double g) { return -grad_half_sq(N, Vector(x - y - g * d))(d); };
  const double s0 = slope(0.0);
  if (s0 >= 0.0) return 0.0;
  double shi = slope(gmax);
  if (shi <= 0.0) return gmax;
  // Illinois false position on the nondecreasing slope.
  double lo = 0.0;
  double hi = gmax;
  double slo = s0;
  int side = 0;
  for (int it = 0; it < 200; ++it) {
    double mid = lo - slo * (hi - lo) / (shi - slo);
    if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double sm = slope(mid);
    if (std::abs(sm) <= 1e-12 * -s0) return mid;
    if (sm < 0.0) {
      lo = mid;
      slo = sm;
      if (side == -1) shi *= 0.5;
      side = -1;
    } else {
      hi = mid;
      shi = sm;
      if (side == 1) slo *= 0.5;
      side = 1;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

double frank_wolfe_gap(const Norm& N, const ConvexBody& K, const Vector& x, const Vector& y) {
  const Functional phi = grad_half_sq(N, Vector(x - y));
  return K.support(phi) - phi(y);
}

// An ulp-level error in x - y moves L(x - y) by about |J_L| eps |x|, and the
// gap multiplies that by the width of K; gaps below this are not resolvable.
double gap_floor(const Norm& N, const Vector& x, const Vector& w, double width) {
  if (w.norm() < 1e-10) return 0.0;
  const double lip = legendre_jacobian(N, w).cwiseAbs().rowwise().sum().maxCoeff();
  return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + x.lpNorm<Eigen::Infinity>()) * width * lip;
}

double body_width(const ConvexBody& K) {
  double width = 0.0;
  for (int i = 0; i < K.dimension(); ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(K.dimension(), i);
    width = std::max(width, K.support(Functional(e)) + K.support(Functional(-e)));
  }
  return width;
}

struct Stopper {
  double opt_gap;
  int max_iter;
  // Rounding floor of the gap, see gap_floor.
  double floor = 0.0;
  int certified_at = -1;

  double certificate(double dist) const {
    return std::max(opt_gap * std::min(1.0, dist * dist), floor);
  }

  // True when iteration should end after observing `gap` at iteration `it`.
  bool done(double gap, double dist, int it) {
    const double cert = certificate(dist);
    if (gap <= cert * kRefineFactor) return true;
    if (gap <= cert && certified_at < 0) certified_at = it;
    if (certified_at >= 0 && it - certified_at >= kIterationsAfterCertificate) return true;
    return it >= max_iter;
  }
};

// Newton's method for rho(x - y)^2 / 2 on the affine hull of a polytope face,
// adding a facet to the working set whenever a step is blocked by it and
// releasing one whose KKT multiplier is negative once the face is solved.
Vector polish_on_face(const Norm& N, const body_kind::Polytope& P, const Vector& x, Vector y,
                      std::vector<int> working) {
  const int n = N.dimension();
  const Eigen::Index facets = P.facet_normals.rows();
  std::vector<char> in_working(static_cast<std::size_t>(facets), 0);
  for (int j : working) in_working[static_cast<std::size_t>(j)] = 1;
  int releases = 0;
  // Drops the facet with the most negative multiplier in L(x - y) = sum l_j a_j.
  auto release = [&]() {
    if (working.empty() || releases >= 2 * static_cast<int>(facets)) return false;
    const Eigen::VectorXd target = grad_half_sq(N, Vector(x - y)).coeffs();
    Eigen::MatrixXd At(n, static_cast<Eigen::Index>(working.size()));
    for (std::size_t r = 0; r < working.size(); ++r) At.col(static_cast<Eigen::Index>(r)) = P.facet_normals.row(working[r]).transpose();
    const Eigen::MatrixXd pinv = At.completeOrthogonalDecomposition().pseudoInverse();
    const Eigen::VectorXd lambda = pinv * target;
    // p > 2 makes the multipliers of nearly free facets tiny (cubic in the
    // offset for p = 4), so only the componentwise rounding level of the
    // solve is excluded. A wrong release costs one blocked Newton step.
    const Eigen::VectorXd noise =
        64.0 * std::numeric_limits<double>::epsilon() * (pinv.cwiseAbs() * target.cwiseAbs());
    Eigen::Index worst = -1;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      if (lambda(j) < -noise(j) && (worst < 0 || lambda(j) < lambda(worst))) worst = j;
    }
    if (worst < 0) return false;
    in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(worst)])] = 0;
    working.erase(working.begin() + worst);
    ++releases;
    return true;
  };
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::MatrixXd basis;
    if (working.empty()) {
      basis = Eigen::MatrixXd::Identity(n, n);
    } else {
      Eigen::MatrixXd A(static_cast<Eigen::Index>(working.size()), n);
      for (std::size_t r = 0; r < working.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = P.facet_normals.row(working[r]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
      lu.setThreshold(1e-10);
      if (lu.rank() >= n) {
        if (release()) continue;
        return y;
      }
      basis = lu.kernel();
      // orthonormalize for a well-conditioned reduced system
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
      basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, basis.cols());
    }
    const Vector w = x - y;
    const Eigen::VectorXd grad = -grad_half_sq(N, w).coeffs();
    const Eigen::VectorXd g = basis.transpose() * grad;
    if (g.lpNorm<Eigen::Infinity>() == 0.0) {
      if (release()) continue;
      return y;
    }
    Eigen::MatrixXd H = basis.transpose() * legendre_jacobian(N, w) * basis;
    const double reg = 1e-30 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
    H.diagonal().array() += reg;
    const Eigen::VectorXd dz = H.ldlt().solve(-g);
    const Vector d = basis * dz;
    if (!d.allFinite() || d.lpNorm<Eigen::Infinity>() <= 1e-16 * (1.0 + y.lpNorm<Eigen::Infinity>())) {
      if (release()) continue;
      return y;
    }

    double alpha_max = std::numeric_limits<double>::infinity();
    int blocking = -1;
    for (Eigen::Index j = 0; j < facets; ++j) {
      if (in_working[static_cast<std::size_t>(j)]) continue;
      const double ad = P.facet_normals.row(j).dot(d);
      if (ad <= 0.0) continue;
      const double room = std::max(0.0, P.facet_offsets(j) - P.facet_normals.row(j).dot(y));
      const double a = room / ad;
      if (a < alpha_max) {
        alpha_max = a;
        blocking = static_cast<int>(j);
      }
    }
    // Exact line search along the Newton direction whenever the full step
    // undershoots: flat norms (p > 2) give degenerate roots where plain
    // Newton only contracts linearly and the objective decrease is invisible.
    const double s0 = grad.dot(d);
    if (s0 >= 0.0) return y;
    const double a1 = std::min(1.0, alpha_max);
    const double s1 = -grad_half_sq(N, Vector(x - y - a1 * d))(d);
    double alpha = a1;
    if (s1 > 0.0) {
      alpha = line_search(N, x, y, d, a1);
    } else if (s1 < 0.1 * s0 && alpha_max > 1.0) {
      alpha = line_search(N, x, y, d, std::min(alpha_max, 8.0));
    }
    if (alpha == 0.0) return y;
    const bool blocked = blocking >= 0 && alpha == alpha_max;
    y += alpha * d;
    if (blocked) {
      working.push_back(blocking);
      in_working[static_cast<std::size_t>(blocking)] = 1;
    }
  }
  return y;
}

ProjectionResult project_polytope(const Norm& N, const ConvexBody& K, const body_kind::Polytope& P, const Vector& x,
                                  const Tolerances& tol) {
  const std::size_t m = P.vertices.size();
  std::vector<double> weight(m, 0.0);
  const Functional phi0 = grad_half_sq(N, Vector(x - K.center()));
  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (phi0(P.vertices[i]) > phi0(P.vertices[start])) start = i;
  }
  weight[start] = 1.0;
  Vector y = P.vertices[start];
  Stopper stop{tol.opt_gap, tol.max_iter};
  const double width = body_width(K);
  ProjectionResult out;

  std::vector<double> values(m);
  int it = 0;
  double gap = 0.0;
  for (;; ++it) {
    const Vector w = x - y;
    const Functional phi = grad_half_sq(N, w);
    for (std::size_t i = 0; i < m; ++i) values[i] = phi(P.vertices[i]);
    std::size_t s = 0;
    for (std::size_t i = 1; i < m; ++i) {
      if (values[i] > values[s]) s = i;
    }
    const double phi_y = phi(y);
    gap = values[s] - phi_y;
    const double dist = N(w);
    if (it % kPolishEvery == 0) stop.floor = gap_floor(N, x, w, width);
    const bool done = stop.done(gap, dist, it);

    if (done || it % kPolishEvery == kPolishEvery - 1 || gap <= stop.certificate(dist)) {
      std::vector<int> face;
      for (Eigen::Index j = 0; j < P.facet_normals.rows(); ++j) {
        const auto& members = P.facet_vertices[static_cast<std::size_t>(j)];
        bool all = true;
        for (std::size_t i = 0; i < m && all; ++i) {
          if (weight[i] > 0.0 && std::find(members.begin(), members.end(), static_cast<int>(i)) == members.end()) {
            all = false;
          }
        }
        if (all) face.push_back(static_cast<int>(j));
      }
      // The weight support can carry stray vertices, so geometric active sets
      // at a few thresholds relative to the distance are tried as well.
      std::vector<std::vector<int>> faces{face};
      const Eigen::VectorXd room = P.facet_offsets - P.facet_normals * y;
      const double floor = 1e-14 * (1.0 + y.lpNorm<Eigen::Infinity>());
      for (double tau : {1e-10, 1e-6, 1e-3, 1e-1}) {
        std::vector<int> near;
        for (Eigen::Index j = 0; j < room.size(); ++j)
          if (room(j) <= tau * dist + floor) near.push_back(static_cast<int>(j));
        if (std::find(faces.begin(), faces.end(), near) == faces.end()) faces.push_back(std::move(near));
      }
      bool accepted = false;
      for (const auto& trial : faces) {
        const Vector candidate = polish_on_face(N, P, x, y, trial);
        if (K.slack(candidate) < -1e-12 * (1.0 + candidate.lpNorm<Eigen::Infinity>())) continue;
        const double cand_gap = frank_wolfe_gap(N, K, x, candidate);
        const double cand_dist = N(Vector(x - candidate));
        const bool no_worse = cand_dist <= dist * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
        if (cand_gap <= stop.certificate(cand_dist) && (cand_gap < gap || no_worse)) {
          y = candidate;
          gap = cand_gap;
          accepted = true;
          break;
        }
      }
      if (accepted) {
        ++it;
        break;
      }
    }
    if (done) break;

    std::size_t away = start;
    bool have_away = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (weight[i] > 0.0 && (!have_away || values[i] < values[away])) {
        away = i;
        have_away = true;
      }
    }
    const double away_gap = phi_y - values[away];
    if (gap >= away_gap) {
      const Vector d = P.vertices[s] - y;
      const double g = line_search(N, x, y, d, 1.0);
      if (g == 0.0) {
        ++it;
        break;
      }
      for (double& a : weight) a *= (1.0 - g);
      weight[s] += g;
      if (g == 1.0) {
        std::fill(weight.begin(), weight.end(), 0.0);
        weight[s] = 1.0;
        y = P.vertices[s];
      } else {
        y += g * d;
      }
    } else {
      const double a = weight[away];
      const double gmax = a / (1.0 - a);
      const Vector d = y - P.vertices[away];
      const double g = line_search(N, x, y, d, gmax);
      if (g == 0.0) {
        ++it;
        break;
      }
      for (double& wgt : weight) wgt *= (1.0 + g);
      weight[away] -= g;
      if (g == gmax) weight[away] = 0.0;
      y += g * d;
    }
  }
  out.point = y;
  out.distance = N(Vector(x - y));
  out.gap = gap;
  out.iterations = it;
  out.certified = gap <= stop.certificate(out.distance);
  return out;
}

// Newton (Levenberg-Marquardt) polish for a ball in a norm M different from
// the ambient one, over boundary points y(s) = c + r s / M(s).
Vector polish_on_sphere(const Norm& N, const body_kind::Ball& B, const Vector& x, const Vector& y0) {
  const int n = N.dimension();
  const Norm& M = B.norm;
  auto point = [&](const Vector& s) -> Vector { return B.center + B.radius * s / M(s); };
  auto objective = [&](const Vector& s) { return half_sq(N, Vector(x - point(s))); };
  auto gradient = [&](const Vector& s) -> Eigen::VectorXd {
    const double ms = M(s);
    const Eigen::VectorXd gm = norm_grad(M, s).coeffs();
    const Eigen::MatrixXd J = B.radius * (Eigen::MatrixXd::Identity(n, n) / ms - s * gm.transpose() / (ms * ms));
    return -J.transpose() * grad_half_sq(N, Vector(x - point(s))).coeffs();
  };
  Vector s = y0 - B.center;
  if (M(s) == 0.0) return y0;
  s /= M(s);
  double f = objective(s);
  double lambda = 1e-10;
  for (int iter = 0; iter < 60; ++iter) {
    const Eigen::VectorXd g = gradient(s);
    if (g.lpNorm<Eigen::Infinity>() <= 1e-17) break;
    const double h = 1e-6;
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i) {
      Vector sp = s;
      Vector sm = s;
      sp(i) += h;
      sm(i) -= h;
      H.col(i) = (gradient(sp) - gradient(sm)) / (2.0 * h);
    }
    H = 0.5 * (H + H.transpose());
    // The objective is constant along s; FD noise can make that null
    // direction indefinite, so it gets explicit curvature.
    const Eigen::VectorXd radial = s / s.norm();
    H += (1.0 + H.diagonal().cwiseAbs().maxCoeff()) * radial * radial.transpose();
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd Hl = H;
      Hl.diagonal().array() += lambda * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
      const Eigen::VectorXd step = Hl.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      Vector trial = s + step;
      if (M(trial) == 0.0) {
        lambda *= 10.0;
        continue;
      }
      trial /= M(trial);
      const double ft = objective(trial);
      // Near the optimum the decrease drops below rounding; a smaller
      // gradient then decides.
      const bool flat = ft <= f * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()) &&
                        gradient(trial).lpNorm<Eigen::Infinity>() < g.lpNorm<Eigen::Infinity>();
      if (ft < f || flat) {
        s = trial;
        f = ft;
        lambda = std::max(lambda * 0.1, 1e-16);
        improved = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return point(s);
}

ProjectionResult project_generic(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol) {
  Vector y = K.argmax(grad_half_sq(N, Vector(x - K.center())));
  Stopper stop{tol.opt_gap, tol.max_iter};
  const double width = body_width(K);
  const auto* ball = std::get_if<body_kind::Ball>(&K.kind());
  ProjectionResult out;
  int it = 0;
  double gap = 0.0;
  for (;; ++it) {
    const Functional phi = grad_half_sq(N, Vector(x - y));
    const Vector s = K.argmax(phi);
    gap = phi(s) - phi(y);
    const double dist = N(Vector(x - y));
    if (it % kPolishEvery == 0) stop.floor = gap_floor(N, x, Vector(x - y), width);
    const bool done = stop.done(gap, dist, it);
    // A tiny gap only pins the point to about sqrt(gap), so a ball is always
    // polished before returning.
    if (ball != nullptr && (done || it % kPolishEvery == kPolishEvery - 1 || gap <= stop.certificate(dist))) {
      Vector candidate = polish_on_sphere(N, *ball, x, y);
      double cand_gap = frank_wolfe_gap(N, K, x, candidate);
      // A fresh Hessian from the polished point can finish a stalled run.
      for (int again = 0; again < 3 && cand_gap > 0.0; ++again) {
        const Vector next = polish_on_sphere(N, *ball, x, candidate);
        const double next_gap = frank_wolfe_gap(N, K, x, next);
        if (!(next_gap < cand_gap)) break;
        candidate = next;
        cand_gap = next_gap;
      }
      const double cand_dist = N(Vector(x - candidate));
      const bool no_worse = cand_dist <= dist * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
      if (cand_gap <= stop.certificate(cand_dist) && (cand_gap < gap || no_worse)) {
        y = candidate;
        gap = cand_gap;
        ++it;
        break;
      }
    }
    if (done) break;
    const Vector d = s - y;
    const double g = line_search(N, x, y, d, 1.0);
    if (g == 0.0) {
      ++it;
      break;
    }
    y += g * d;
  }
  out.point = y;
  out.distance = N(Vector(x - y));
  out.gap = gap;
  out.iterations = it;
  out.certified = gap <= stop.certificate(out.distance);
  return out;
}

}  // namespace

ProjectionResult project(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol) {
  require_dimension(K.dimension(), N.dimension(), "projection norm");
  require_dimension(K.dimension(), static_cast<int>(x.size()), "projection point");
  require_finite(x, "projection point");
  tol.validate();
  const double band = 100.0 * tol.eq_tol;

  const double slack = K.slack(x);
  if (slack >= 0.0) {
    ProjectionResult r;
    r.point = x;
    r.boundary_band = slack <= band;
    return r;
  }

  ProjectionResult r = std::visit(
      [&](const auto& k) -> ProjectionResult {
        using Kd = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<Kd, body_kind::Polytope>) {
          return project_polytope(N, K, k, x, tol);
        } else if constexpr (std::is_same_v<Kd, body_kind::Ball>) {
          if (k.norm.same_as(N)) {
            const Vector d = x - k.center;
            ProjectionResult closed;
            closed.point = k.center + k.radius * d / N(d);
            closed.distance = N(Vector(x - closed.point));
            closed.gap = frank_wolfe_gap(N, K, x, closed.point);
            return closed;
          }
          return project_generic(N, K, x, tol);
        } else {
          if (k.norm.same_as(N)) {
            // The outward ray from a projection keeps its projection, so
            // p_{K + delta B}(x) = p_K(x) + delta eta_K(x).
            ProjectionResult inner = project(N, *k.base, x, tol);
            ProjectionResult closed;
            closed.point = inner.point + k.delta * *inner.outer_normal;
            closed.distance = N(Vector(x - closed.point));
            closed.gap = frank_wolfe_gap(N, K, x, closed.point);
            closed.iterations = inner.iterations;
            closed.certified = inner.certified;
            return closed;
          }
          return project_generic(N, K, x, tol);
        }
      },
      K.kind());
  if (r.certified && r.gap > tol.opt_gap * std::min(1.0, r.distance * r.distance))
    r.certified = r.gap <= gap_floor(N, x, Vector(x - r.point), body_width(K));
  if (r.distance > 0.0) r.outer_normal = Vector((x - r.point) / r.distance);
  r.boundary_band = r.distance <= band;
  return r;
}

double distance(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol) {
  return project(N, K, x, tol).distance;
}

Vector distance_gradient(const Norm& N, const ConvexBody& K, const Vector& x, const Tolerances& tol) {
  const ProjectionResult r = project(N, K, x, tol);
  if (r.boundary_band) {
    throw NonDifferentiableError("the distance function is not differentiable on the boundary of the body");
  }
  if (!r.outer_normal) return Vector::Zero(N.dimension());
  return *r.outer_normal;
}

bool sun_check(const Norm& N, const ConvexBody& K, const Vector& x, double t, const Tolerances& tol) {
  if (!(t > 0)) throw DomainError("sun_check needs t > 0");
  const ProjectionResult r = project(N, K, x, tol);
  if (!r.outer_normal) throw DomainError("sun_check needs a point outside the body");
  const Vector ray_point = r.point + t * *r.outer_normal;
  const ProjectionResult again = project(N, K, ray_point, tol);
  return N(Vector(again.point - r.point)) <= 10.0 * tol.eq_tol;
}

bool parallel_normal_check(const Norm& N, const ConvexBody& K, const Vector& z, const Vector& u, double delta,
                           const Tolerances& tol, std::uint64_t seed) {
  if (!(delta > 0)) throw DomainError("parallel_normal_check needs delta > 0");
  if (std::abs(N(u) - 1.0) > 10.0 * tol.eq_tol) throw DomainError("parallel_normal_check needs a unit vector u");
  const NormalCone cone = normal_cone(K, z, N);
  if (!cone.contains(u)) throw DomainError("parallel_normal_check: u is not in the normal cone at z");
  const ConvexBody outer = parallel_body(K, delta, N, tol);
  const Functional phi = legendre(N, u);
  const Vector apex = z + delta * u;
  const double level = phi(apex);
  const double scale = 1.0 + std::abs(level);
  if (phi(outer.argmax(phi)) - level > tol.eq_tol * scale) return false;
  CounterRng rng(seed, 0x70617261ULL);
  for (int i = 0; i < 256; ++i) {
    const Functional psi(rng.normal_vector(N.dimension()));
    if (phi(outer.argmax(psi)) - level > tol.eq_tol * scale) return false;
  }
  return true;
}

}  // namespace minkowski
