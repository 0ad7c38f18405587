#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "minkowski/errors.hpp"

namespace minkowski {

// Points and directions of R^n.
using Vector = Eigen::VectorXd;

// Element of the dual space (R^n)*, stored in the dual standard basis.
// Deliberately not convertible to or from Vector.
class Functional {
 public:
  Functional() = default;
  explicit Functional(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {}

  static Functional zero(int dim) { return Functional(Eigen::VectorXd::Zero(dim)); }

  int dimension() const { return static_cast<int>(coeffs_.size()); }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  double operator()(const Vector& v) const;

  bool is_zero() const { return coeffs_.isZero(0.0); }

  Functional operator+(const Functional& o) const { return Functional(coeffs_ + o.coeffs_); }
  Functional operator-(const Functional& o) const { return Functional(coeffs_ - o.coeffs_); }
  Functional operator-() const { return Functional(-coeffs_); }
  Functional operator*(double s) const { return Functional(coeffs_ * s); }
  friend Functional operator*(double s, const Functional& f) { return f * s; }

 private:
  Eigen::VectorXd coeffs_;
};

// Element of the bidual (R^n)**, acting on functionals.
class Bidual {
 public:
  Bidual() = default;
  explicit Bidual(Eigen::VectorXd coords) : coords_(std::move(coords)) {}

  int dimension() const { return static_cast<int>(coords_.size()); }
  const Eigen::VectorXd& coords() const { return coords_; }

  double operator()(const Functional& phi) const;

 private:
  Eigen::VectorXd coords_;
};

// The canonical identification J: R^n -> (R^n)**, J(x)(phi) = phi(x).
Bidual canonical_embed(const Vector& x);

struct Tolerances {
  double eq_tol = 1e-8;
  double fd_step = 1e-6;
  double opt_gap = 1e-7;
  int max_iter = 10000;

  // Throws DomainError unless every field is strictly positive.
  void validate() const;
};

// The affine hyperplane {y : normal(y) = offset}.
class Hyperplane {
 public:
  Hyperplane(Functional normal, double offset = 0.0);

  // Hyperplane through the origin spanned by n-1 linearly independent
  // vectors. The normal is the unit Euclidean kernel vector with its first
  // nonzero coefficient positive.
  static Hyperplane spanned_by(const std::vector<Vector>& spanning);

  const Functional& normal() const { return normal_; }
  double offset() const { return offset_; }
  int dimension() const { return normal_.dimension(); }
  bool through_origin() const { return offset_ == 0.0; }

  bool contains(const Vector& y, double tol) const;

  // n-1 vectors spanning the direction space ker(normal).
  std::vector<Vector> basis() const;

 private:
  Functional normal_;
  double offset_;
};

// Scale-aware comparison: every coordinate differs by at most
// tol * (1 + max(|a|_inf, |b|_inf)).
bool approx_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol);
bool approx_equal(const Functional& a, const Functional& b, double tol);

void require_dimension(int expected, int actual, const char* what);
void require_finite(const Eigen::VectorXd& v, const char* what);

// Orthonormal (Euclidean) basis of the kernel of a nonzero functional.
std::vector<Vector> kernel_basis(const Functional& phi);

}  // namespace minkowski
