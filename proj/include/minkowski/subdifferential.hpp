#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "minkowski/bodies.hpp"
#include "minkowski/core.hpp"
#include "minkowski/norms.hpp"

namespace minkowski {

struct AffinePiece {
  Functional phi;
  double b = 0.0;
};

namespace function_kind {

// f(x) = max_i phi_i(x) + b_i.
struct MaxAffine {
  std::vector<AffinePiece> pieces;
};

struct DistanceToBody {
  ConvexBody body;
  Norm norm;
};

// Black-box convex function. `derivative(x, v)` returns the one-sided
// derivative f'+(x, v); when absent it is estimated by finite differences.
struct Smooth {
  std::function<double(const Vector&)> evaluate;
  std::function<double(const Vector&, const Vector&)> derivative;
};

}  // namespace function_kind

using FunctionKind = std::variant<function_kind::MaxAffine, function_kind::DistanceToBody, function_kind::Smooth>;

// Real-valued convex function on R^n with a one-sided derivative oracle.
class ConvexFunction {
 public:
  static ConvexFunction max_affine(std::vector<AffinePiece> pieces);
  static ConvexFunction distance_to(ConvexBody body, Norm norm, const Tolerances& tol = {});
  static ConvexFunction smooth(int dim, std::function<double(const Vector&)> evaluate,
                               std::function<double(const Vector&, const Vector&)> derivative = {},
                               const Tolerances& tol = {});
  // rho itself, with f'+(x, v) = d(rho)_x(v) off the origin and rho(v) at it.
  static ConvexFunction norm_function(const Norm& N);
  // rho^2 / 2, with f'+(x, v) = L(x)(v).
  static ConvexFunction half_squared_norm(const Norm& N);

  int dimension() const { return dim_; }
  const FunctionKind& kind() const { return *kind_; }
  const Tolerances& tolerances() const { return tol_; }

  double operator()(const Vector& x) const;

 private:
  ConvexFunction(int dim, std::shared_ptr<const FunctionKind> kind, Tolerances tol)
      : dim_(dim), kind_(std::move(kind)), tol_(tol) {}
  int dim_;
  std::shared_ptr<const FunctionKind> kind_;
  Tolerances tol_;
};

// Indices of the max-affine pieces within eq_tol of the maximum at x.
std::vector<int> active_pieces(const function_kind::MaxAffine& f, const Vector& x, double eq_tol);

// f'+(x, v). Exact for max-affine functions (largest slope along v among the
// active pieces); d(rho)_{x - p_K(x)}(v) for d_K off the boundary band of K;
// otherwise the derivative callback or one-sided differences at steps
// fd_step 2^-j (j = 0..3) with Richardson extrapolation.
double dir_deriv_plus(const ConvexFunction& f, const Vector& x, const Vector& v);

// f'-(x, v) = -f'+(x, -v).
double dir_deriv_minus(const ConvexFunction& f, const Vector& x, const Vector& v);

// |f'+(x, e_i) + f'+(x, -e_i)| <= 10 eq_tol on every coordinate direction.
bool is_differentiable_at(const ConvexFunction& f, const Vector& x);

// L^-1(df_x), or 0 when df_x = 0. Throws NonDifferentiableError when f is
// not differentiable at x.
Vector norm_gradient(const ConvexFunction& f, const Vector& x, const Norm& N);

enum class Verdict { member, non_member, inconclusive };

const char* to_string(Verdict v);

struct SubgradientCertificate {
  Vector point;
  Vector candidate;
  Verdict verdict = Verdict::inconclusive;
  Vector worst_direction;
  // min over tested unit u of f'+(x, u) - L(v)(u).
  double margin = 0.0;
  // Exact verdict for max-affine functions (L(v) in the hull of the active
  // slopes); empty otherwise.
  std::optional<bool> exact;
};

// Tests v in the norm sub-differential of f at x through
// f'+(x, u) >= L(v)(u) on a fixed set of unit directions. The directional
// derivatives are computed once, so many candidates can be tested cheaply.
class SubgradientTester {
 public:
  SubgradientTester(ConvexFunction f, Vector x, Norm N, int m_dirs, std::uint64_t seed = 0);

  // `margin_tol` defaults to 10 eq_tol.
  SubgradientCertificate test(const Vector& v, std::optional<double> margin_tol = std::nullopt) const;

  const std::vector<Vector>& directions() const { return directions_; }

 private:
  ConvexFunction f_;
  Vector x_;
  Norm norm_;
  int m_dirs_;
  std::vector<Vector> directions_;
  std::vector<double> derivatives_;
};

SubgradientCertificate subgradient_member(const ConvexFunction& f, const Vector& x, const Vector& v, const Norm& N,
                                          int m_dirs = 64, std::uint64_t seed = 0,
                                          std::optional<double> margin_tol = std::nullopt);

// Sub-linear functions g_0 = f'+(x, .), g_m = (g_{m-1})'+(e_m, .), built by
// subgradient_construct. g_n is linear.
struct SublinearChain {
  std::vector<Vector> basis;                                // e_1 = u / |u|, then coordinate axes
  std::vector<std::function<double(const Vector&)>> g;      // g_0 .. g_n
  Functional linear;                                        // g_n in the dual basis
  Vector subgradient;                                       // L^-1(g_n)
};

// Builds a norm sub-gradient w of f at x with L(w)(u) = f'+(x, u) via the
// iterated one-sided derivative recursion. Exact for max-affine functions
// (active-set recursion); nested finite differences otherwise, with accuracy
// ceiling kConstructTolerance. Verifies membership and the max-formula
// equality before returning and throws ConvergenceError if either fails.
SublinearChain subgradient_construct_chain(const ConvexFunction& f, const Vector& x, const Vector& u, const Norm& N);
Vector subgradient_construct(const ConvexFunction& f, const Vector& x, const Vector& u, const Norm& N);

inline constexpr double kConstructTolerance = 1e-4;

struct EstimateReport {
  double sup_minus = 0.0;
  double lower = 0.0;  // ||v||^2
  double inf_plus = 0.0;
  bool holds = false;
  // min(||v||^2 - sup_minus, inf_plus - ||v||^2).
  double slack = 0.0;
};

// Samples m vectors z of h = ker L(v) (norms log-uniform in
// [0.01, 10] ||v||) and checks sup f'-(x, v+z) <= ||v||^2 <= inf f'+(x, v+z)
// within 10 eq_tol.
EstimateReport estimate_check(const ConvexFunction& f, const Vector& x, const Vector& v, const Norm& N, int m,
                              std::uint64_t seed = 0);

}  // namespace minkowski
