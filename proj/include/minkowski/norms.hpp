#pragma once

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minkowski/core.hpp"

namespace minkowski {

namespace norm_kind {

struct Euclidean {};

// (sum_i w_i |x_i|^p)^(1/p), 1 < p < inf, w_i > 0.
struct WeightedP {
  double p;
  Eigen::VectorXd weights;
};

// sqrt(x^T A x), A symmetric positive definite.
struct Ellipsoidal {
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_inv;
};

// User-supplied oracle. Callbacks must be pure: they are invoked
// concurrently and repeatedly at the same points.
struct Custom {
  std::function<double(const Vector&)> evaluate;
  std::function<Eigen::VectorXd(const Vector&)> gradient;  // may be empty
};

}  // namespace norm_kind

using NormKind =
    std::variant<norm_kind::Euclidean, norm_kind::WeightedP, norm_kind::Ellipsoidal, norm_kind::Custom>;

// A smooth, strictly convex norm on R^n. Cheap to copy; immutable.
class Norm {
 public:
  using EvalFn = std::function<double(const Vector&)>;
  using GradFn = std::function<Eigen::VectorXd(const Vector&)>;

  static Norm euclidean(int dim);
  static Norm weighted_p(double p, Eigen::VectorXd weights);
  static Norm p_norm(double p, int dim) { return weighted_p(p, Eigen::VectorXd::Ones(dim)); }
  static Norm ellipsoidal(Eigen::MatrixXd A);

  // Black-box norm. Runs `probes` randomized checks of positivity,
  // homogeneity, the triangle inequality and strict convexity, and throws
  // DomainError on the first failure.
  static Norm custom(int dim, EvalFn evaluate, GradFn gradient = {}, const Tolerances& tol = {},
                     int probes = 64);

  int dimension() const;
  const NormKind& kind() const;
  const Tolerances& tolerances() const;
  std::string name() const;

  double operator()(const Vector& x) const;

  // Same parameters (for built-ins) or same callback object (custom).
  bool same_as(const Norm& other) const;

 private:
  struct Impl;
  explicit Norm(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct UnitBallSample {
  std::vector<Vector> points;
  int density = 0;
};

double norm_eval(const Norm& N, const Vector& x);

// The differential d(rho)_x. Analytic for built-in norms; for custom norms
// without a gradient callback, central differences with one Richardson step
// (h and h/2, h = fd_step * (1 + |x|_inf)). Throws SingularPointError when
// |x|_2 < 1e-10.
Functional norm_grad(const Norm& N, const Vector& x);

// m points on the unit sphere of N: deterministic quasi-random directions
// (Halton sequence through Box-Muller, rotated by a seed-dependent shift),
// normalized radially.
UnitBallSample sphere_sample(const Norm& N, int m, std::uint64_t seed);

// Richardson-extrapolated central-difference gradient of a scalar function.
Eigen::VectorXd central_difference_gradient(const std::function<double(const Vector&)>& f,
                                            const Vector& x, double step);

}  // namespace minkowski
