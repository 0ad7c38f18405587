#include "minkowski/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace minkowski {

namespace {

struct AscentResult {
  Vector u;
  double value;
  double residual;
};

// Maximizes phi(u)/rho(u) from a start direction. The Euclidean gradient of
// that ratio at a unit u is r = phi - phi(u) d(rho)_u, which vanishes exactly
// at the maximizer.
AscentResult sphere_ascent(const Norm& N, const Functional& phi, Vector u, const Tolerances& tol,
                           double scale) {
  u /= N(u);
  double value = phi(u);
  double step = 0.1 / scale;
  Eigen::VectorXd residual = phi.coeffs() - value * norm_grad(N, u).coeffs();
  double res_norm = residual.lpNorm<Eigen::Infinity>();
  // Polishes well past opt_gap (the acceptance threshold) because the inverse
  // map amplifies residuals near the coordinate axes of flat norms.
  const double target = 1e-4 * tol.opt_gap * scale;
  for (int it = 0; it < tol.max_iter && res_norm > target; ++it) {
    Vector trial = u + step * residual;
    trial /= N(trial);
    const double trial_value = phi(trial);
    const Eigen::VectorXd trial_residual = phi.coeffs() - trial_value * norm_grad(N, trial).coeffs();
    const double trial_res = trial_residual.lpNorm<Eigen::Infinity>();
    // Near the maximizer the value is flat to rounding; the residual decides.
    const bool tied = trial_value >= value - 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    if (trial_value > value || (tied && trial_res < res_norm)) {
      u = trial;
      value = std::max(value, trial_value);
      residual = trial_residual;
      res_norm = trial_res;
      step *= 2.0;
    } else {
      step *= 0.5;
      if (step * res_norm < 1e-17 * (1.0 + u.lpNorm<Eigen::Infinity>())) break;
    }
  }
  return {u, value, res_norm};
}

// Newton on lambda g(u) = phi, rho(u) = 1, with the Hessian of rho taken from
// differences of the gradient. Steepest ascent stalls along directions where
// the sphere is flat; this recovers them. Steps that do not lower the
// residual are rejected.
void newton_polish(const Norm& N, const Functional& phi, AscentResult& r) {
  const Eigen::Index n = r.u.size();
  const double h = 1e-4 * (1.0 + r.u.lpNorm<Eigen::Infinity>());
  for (int it = 0; it < 8; ++it) {
    const Eigen::VectorXd g = norm_grad(N, r.u).coeffs();
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Vector probe = r.u;
    for (Eigen::Index j = 0; j < n; ++j) {
      probe(j) = r.u(j) + h;
      const Eigen::VectorXd gp = norm_grad(N, probe).coeffs();
      probe(j) = r.u(j) - h;
      const Eigen::VectorXd gm = norm_grad(N, probe).coeffs();
      probe(j) = r.u(j);
      J.block(0, j, n, 1) = r.value * (gp - gm) / (2.0 * h);
    }
    J.block(0, n, n, 1) = g;
    J.block(n, 0, 1, n) = g.transpose();
    Eigen::VectorXd F(n + 1);
    F.head(n) = r.value * g - phi.coeffs();
    F(n) = N(r.u) - 1.0;
    const Eigen::VectorXd step = J.fullPivLu().solve(F);
    if (!step.allFinite()) return;
    Vector u = r.u - step.head(n);
    u /= N(u);
    const double value = phi(u);
    const double res = (phi.coeffs() - value * norm_grad(N, u).coeffs()).lpNorm<Eigen::Infinity>();
    if (!(res < r.residual)) return;
    r = {std::move(u), value, res};
  }
}

Vector custom_maximizer(const Norm& N, const Functional& phi, const Tolerances& tol) {
  const double scale = phi.coeffs().lpNorm<Eigen::Infinity>();
  const UnitBallSample sample = sphere_sample(N, 256, 0);
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(sample.points.size());
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    ranked.emplace_back(phi(sample.points[i]), static_cast<int>(i));
  }
  std::partial_sort(ranked.begin(), ranked.begin() + 4, ranked.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  AscentResult best{Vector(), -1.0, 0.0};
  for (int s = 0; s < 4; ++s) {
    AscentResult r = sphere_ascent(N, phi, sample.points[static_cast<std::size_t>(ranked[s].second)], tol, scale);
    if (best.u.size() == 0 || r.value > best.value) best = std::move(r);
  }
  newton_polish(N, phi, best);
  if (best.residual > tol.opt_gap * scale) {
    throw ConvergenceError("dual norm maximization did not converge", best.value);
  }
  return best.u;
}

}  // namespace

Functional legendre(const Norm& N, const Vector& x) {
  require_dimension(N.dimension(), static_cast<int>(x.size()), "legendre argument");
  require_finite(x, "legendre argument");
  if (x.isZero(0.0)) return Functional::zero(N.dimension());
  if (const auto* e = std::get_if<norm_kind::Ellipsoidal>(&N.kind())) return Functional(e->A * x);
  if (std::holds_alternative<norm_kind::Euclidean>(N.kind())) return Functional(x);
  return N(x) * norm_grad(N, x);
}

std::optional<Norm> dual_of(const Norm& N) {
  return std::visit(
      [&](const auto& k) -> std::optional<Norm> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          return Norm::euclidean(N.dimension());
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          const double q = k.p / (k.p - 1.0);
          return Norm::weighted_p(q, k.weights.array().pow(1.0 - q).matrix());
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          return Norm::ellipsoidal(k.A_inv);
        } else {
          return std::nullopt;
        }
      },
      N.kind());
}

double dual_norm(const Norm& N, const Functional& phi, const Tolerances& tol) {
  require_dimension(N.dimension(), phi.dimension(), "dual_norm argument");
  require_finite(phi.coeffs(), "dual_norm argument");
  if (phi.is_zero()) return 0.0;
  if (auto dual = dual_of(N)) return (*dual)(phi.coeffs());
  return phi(custom_maximizer(N, phi, tol));
}

Vector dual_maximizer(const Norm& N, const Functional& phi, const Tolerances& tol) {
  require_dimension(N.dimension(), phi.dimension(), "dual_maximizer argument");
  if (phi.is_zero()) throw DomainError("the zero functional has no maximizer direction");
  return std::visit(
      [&](const auto& k) -> Vector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          return phi.coeffs() / phi.coeffs().norm();
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          Vector v(phi.dimension());
          const double m = phi.coeffs().lpNorm<Eigen::Infinity>();
          for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double c = phi.coeffs()(i);
            v(i) = std::copysign(std::pow(std::abs(c) / m / k.weights(i), 1.0 / (k.p - 1.0)), c);
            if (c == 0.0) v(i) = 0.0;
          }
          return v / N(v);
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          const Vector v = k.A_inv * phi.coeffs();
          return v / N(v);
        } else {
          return custom_maximizer(N, phi, tol);
        }
      },
      N.kind());
}

Vector legendre_inverse(const Norm& N, const Functional& phi, const Tolerances& tol) {
  require_dimension(N.dimension(), phi.dimension(), "legendre_inverse argument");
  require_finite(phi.coeffs(), "legendre_inverse argument");
  if (phi.is_zero()) return Vector::Zero(N.dimension());
  if (const auto* e = std::get_if<norm_kind::Ellipsoidal>(&N.kind())) return e->A_inv * phi.coeffs();
  if (std::holds_alternative<norm_kind::Euclidean>(N.kind())) return phi.coeffs();
  const Vector u = dual_maximizer(N, phi, tol);
  return phi(u) * u;
}

Bidual legendre_of_dual(const Norm& N, const Functional& phi) {
  const auto dual = dual_of(N);
  if (!dual) throw DomainError("the dual norm is only available in closed form for built-in norms");
  return Bidual(legendre(*dual, phi.coeffs()).coeffs());
}

LegendrePair make_legendre_pair(const Norm& N, const Vector& x) { return {x, legendre(N, x)}; }

}  // namespace minkowski
