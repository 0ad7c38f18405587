#include "minkowski/norms.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "minkowski/random.hpp"

namespace minkowski {

struct Norm::Impl {
  int dim;
  NormKind kind;
  Tolerances tol;
};

namespace {

double weighted_p_value(const norm_kind::WeightedP& k, const Vector& x) {
  const double m = x.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += k.weights(i) * std::pow(std::abs(x(i)) / m, k.p);
  return m * std::pow(s, 1.0 / k.p);
}

std::vector<int> first_primes(int count) {
  std::vector<int> primes;
  for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
    bool prime = true;
    for (int p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::uint64_t index, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % static_cast<std::uint64_t>(base));
    index /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

void validate_custom(const Norm& N, int probes) {
  const int n = N.dimension();
  const double tol = N.tolerances().eq_tol;
  if (std::abs(N(Vector::Zero(n))) > tol) throw DomainError("custom norm: evaluate(0) must be 0");
  CounterRng rng(0x6e6f726dULL);
  for (int k = 0; k < probes; ++k) {
    const Vector x = rng.normal_vector(n);
    const Vector y = rng.normal_vector(n);
    const double nx = N(x);
    const double ny = N(y);
    if (!(nx > 0) || !(ny > 0) || !std::isfinite(nx) || !std::isfinite(ny)) {
      throw DomainError("custom norm: evaluate must be positive and finite off the origin");
    }
    const double alpha = rng.uniform(-3.0, 3.0);
    if (std::abs(N(alpha * x) - std::abs(alpha) * nx) > tol * (1.0 + std::abs(alpha) * nx)) {
      throw DomainError("custom norm: absolute homogeneity violated");
    }
    if (N(x + y) > nx + ny + tol * (1.0 + nx + ny)) {
      throw DomainError("custom norm: triangle inequality violated");
    }
    const Vector ux = x / nx;
    const Vector uy = y / ny;
    const double cosine = std::abs(ux.dot(uy)) / (ux.norm() * uy.norm());
    if (cosine <= 0.9 && N(ux + uy) >= 2.0 - tol) {
      throw DomainError("custom norm: strict convexity probe failed (unit sphere contains a segment)");
    }
  }
}

}  // namespace

Norm Norm::euclidean(int dim) {
  if (dim < 1) throw DomainError("norm dimension must be >= 1");
  return Norm(std::make_shared<const Impl>(Impl{dim, norm_kind::Euclidean{}, {}}));
}

Norm Norm::weighted_p(double p, Eigen::VectorXd weights) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw DomainError("weighted p-norm requires 1 < p < infinity (p = 1 and p = infinity are neither smooth nor strictly convex)");
  }
  if (weights.size() < 1) throw DomainError("norm dimension must be >= 1");
  if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
    throw DomainError("weighted p-norm weights must be positive");
  }
  const int dim = static_cast<int>(weights.size());
  return Norm(std::make_shared<const Impl>(Impl{dim, norm_kind::WeightedP{p, std::move(weights)}, {}}));
}

Norm Norm::ellipsoidal(Eigen::MatrixXd A) {
  if (A.rows() < 1 || A.rows() != A.cols()) throw DimensionError("ellipsoidal norm needs a square matrix");
  if (!A.allFinite() || !A.isApprox(A.transpose(), 1e-12)) {
    throw DomainError("ellipsoidal norm matrix must be symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw DomainError("ellipsoidal norm matrix must be positive definite");
  const int dim = static_cast<int>(A.rows());
  Eigen::MatrixXd A_inv = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  A_inv = 0.5 * (A_inv + A_inv.transpose());
  return Norm(std::make_shared<const Impl>(Impl{dim, norm_kind::Ellipsoidal{std::move(A), std::move(A_inv)}, {}}));
}

Norm Norm::custom(int dim, EvalFn evaluate, GradFn gradient, const Tolerances& tol, int probes) {
  if (dim < 1) throw DomainError("norm dimension must be >= 1");
  if (!evaluate) throw DomainError("custom norm needs an evaluate callback");
  tol.validate();
  Norm N(std::make_shared<const Impl>(
      Impl{dim, norm_kind::Custom{std::move(evaluate), std::move(gradient)}, tol}));
  validate_custom(N, probes);
  return N;
}

int Norm::dimension() const { return impl_->dim; }
const NormKind& Norm::kind() const { return impl_->kind; }
const Tolerances& Norm::tolerances() const { return impl_->tol; }

std::string Norm::name() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          os << "euclidean";
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          os << "p=" << k.p;
          if (!k.weights.isOnes()) os << " (weighted)";
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          os << "ellipsoid";
        } else {
          os << "custom";
        }
      },
      impl_->kind);
  os << " n=" << impl_->dim;
  return os.str();
}

double Norm::operator()(const Vector& x) const {
  require_dimension(impl_->dim, static_cast<int>(x.size()), "norm argument");
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          return x.norm();
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          return weighted_p_value(k, x);
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          return std::sqrt(std::max(0.0, x.dot(k.A * x)));
        } else {
          return k.evaluate(x);
        }
      },
      impl_->kind);
}

bool Norm::same_as(const Norm& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->dim != other.impl_->dim || impl_->kind.index() != other.impl_->kind.index()) return false;
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        const auto& o = std::get<K>(other.impl_->kind);
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          return true;
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          return k.p == o.p && k.weights == o.weights;
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          return k.A == o.A;
        } else {
          return false;
        }
      },
      impl_->kind);
}

double norm_eval(const Norm& N, const Vector& x) { return N(x); }

Eigen::VectorXd central_difference_gradient(const std::function<double(const Vector&)>& f,
                                            const Vector& x, double step) {
  const auto n = x.size();
  Eigen::VectorXd g(n);
  Vector probe = x;
  auto central = [&](Eigen::Index i, double h) {
    probe(i) = x(i) + h;
    const double fp = f(probe);
    probe(i) = x(i) - h;
    const double fm = f(probe);
    probe(i) = x(i);
    return (fp - fm) / (2.0 * h);
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d1 = central(i, step);
    const double d2 = central(i, 0.5 * step);
    g(i) = (4.0 * d2 - d1) / 3.0;
  }
  return g;
}

Functional norm_grad(const Norm& N, const Vector& x) {
  require_dimension(N.dimension(), static_cast<int>(x.size()), "norm_grad argument");
  require_finite(x, "norm_grad argument");
  if (x.norm() < 1e-10) throw SingularPointError("norm gradient does not exist at the origin");
  return std::visit(
      [&](const auto& k) -> Functional {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Euclidean>) {
          return Functional(x / x.norm());
        } else if constexpr (std::is_same_v<K, norm_kind::WeightedP>) {
          const double rho = weighted_p_value(k, x);
          Eigen::VectorXd g(x.size());
          for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double r = std::abs(x(i)) / rho;
            g(i) = k.weights(i) * std::copysign(std::pow(r, k.p - 1.0), x(i));
            if (x(i) == 0.0) g(i) = 0.0;
          }
          return Functional(std::move(g));
        } else if constexpr (std::is_same_v<K, norm_kind::Ellipsoidal>) {
          const Eigen::VectorXd Ax = k.A * x;
          return Functional(Ax / std::sqrt(x.dot(Ax)));
        } else {
          if (k.gradient) return Functional(k.gradient(x));
          const double h = N.tolerances().fd_step * (1.0 + x.lpNorm<Eigen::Infinity>());
          return Functional(central_difference_gradient(k.evaluate, x, h));
        }
      },
      N.kind());
}

UnitBallSample sphere_sample(const Norm& N, int m, std::uint64_t seed) {
  if (m < 1) throw DomainError("sphere_sample needs m >= 1");
  const int n = N.dimension();
  UnitBallSample out;
  out.density = m;
  out.points.reserve(static_cast<std::size_t>(m));
  if (n == 1) {
    for (int k = 0; k < m; ++k) {
      Vector v(1);
      v(0) = (k % 2 == 0) ? 1.0 : -1.0;
      out.points.push_back(v / N(v));
    }
    return out;
  }
  const int pairs = (n + 1) / 2;
  const std::vector<int> primes = first_primes(2 * pairs);
  CounterRng rng(seed, 0x73706865ULL);
  std::vector<double> shift(static_cast<std::size_t>(2 * pairs));
  for (double& s : shift) s = rng.uniform();
  std::uint64_t index = 1;
  while (static_cast<int>(out.points.size()) < m) {
    Vector g(2 * pairs);
    for (int j = 0; j < 2 * pairs; ++j) {
      double u = radical_inverse(index, primes[static_cast<std::size_t>(j)]) + shift[static_cast<std::size_t>(j)];
      u -= std::floor(u);
      g(j) = u;
    }
    ++index;
    Vector dir(n);
    for (int j = 0; j < pairs; ++j) {
      const double u1 = std::max(g(2 * j), 1e-300);
      const double radius = std::sqrt(-2.0 * std::log(u1));
      const double angle = 2.0 * M_PI * g(2 * j + 1);
      dir(2 * j) = radius * std::cos(angle);
      if (2 * j + 1 < n) dir(2 * j + 1) = radius * std::sin(angle);
    }
    if (dir.norm() < 1e-12) continue;
    out.points.push_back(dir / N(dir));
  }
  return out;
}

}  // namespace minkowski
