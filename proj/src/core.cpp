#include "minkowski/core.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace minkowski {

double Functional::operator()(const Vector& v) const {
  require_dimension(dimension(), static_cast<int>(v.size()), "functional argument");
  return coeffs_.dot(v);
}

double Bidual::operator()(const Functional& phi) const {
  require_dimension(dimension(), phi.dimension(), "bidual argument");
  return coords_.dot(phi.coeffs());
}

Bidual canonical_embed(const Vector& x) { return Bidual(x); }

void Tolerances::validate() const {
  if (!(eq_tol > 0) || !(fd_step > 0) || !(opt_gap > 0) || max_iter < 1) {
    throw DomainError("tolerances must be strictly positive and max_iter >= 1");
  }
}

Hyperplane::Hyperplane(Functional normal, double offset)
    : normal_(std::move(normal)), offset_(offset) {
  if (normal_.dimension() < 1 || normal_.is_zero()) {
    throw DomainError("hyperplane normal functional must be nonzero");
  }
  require_finite(normal_.coeffs(), "hyperplane normal");
}

Hyperplane Hyperplane::spanned_by(const std::vector<Vector>& spanning) {
  if (spanning.empty()) throw DomainError("hyperplane needs spanning vectors");
  const auto n = spanning.front().size();
  if (static_cast<std::size_t>(n) != spanning.size() + 1) {
    throw DimensionError("a hyperplane in R^n needs exactly n-1 spanning vectors");
  }
  Eigen::MatrixXd rows(spanning.size(), n);
  for (std::size_t i = 0; i < spanning.size(); ++i) {
    require_dimension(static_cast<int>(n), static_cast<int>(spanning[i].size()), "spanning vector");
    rows.row(static_cast<Eigen::Index>(i)) = spanning[i].transpose();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(rows);
  lu.setThreshold(1e-12);
  if (lu.rank() != static_cast<Eigen::Index>(spanning.size())) {
    throw DomainError("spanning vectors are linearly dependent");
  }
  Eigen::VectorXd normal = lu.kernel().col(0).normalized();
  for (Eigen::Index i = 0; i < normal.size(); ++i) {
    if (std::abs(normal(i)) > 1e-14) {
      if (normal(i) < 0) normal = -normal;
      break;
    }
  }
  return Hyperplane(Functional(normal), 0.0);
}

bool Hyperplane::contains(const Vector& y, double tol) const {
  return std::abs(normal_(y) - offset_) <= tol;
}

std::vector<Vector> Hyperplane::basis() const { return kernel_basis(normal_); }

std::vector<Vector> kernel_basis(const Functional& phi) {
  const int n = phi.dimension();
  if (phi.is_zero()) throw DomainError("kernel of the zero functional is the whole space");
  // Householder QR of the single column gives an orthonormal completion.
  Eigen::MatrixXd col = phi.coeffs();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(col);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(n - 1));
  for (int j = 1; j < n; ++j) out.emplace_back(q.col(j));
  return out;
}

bool approx_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  if (a.size() != b.size()) return false;
  if (a.size() == 0) return true;
  const double scale = 1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>());
  return (a - b).lpNorm<Eigen::Infinity>() <= tol * scale;
}

bool approx_equal(const Functional& a, const Functional& b, double tol) {
  return approx_equal(a.coeffs(), b.coeffs(), tol);
}

void require_dimension(int expected, int actual, const char* what) {
  if (expected != actual) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(expected) +
                         ", got " + std::to_string(actual));
  }
}

void require_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + " has non-finite coordinates");
}

}  // namespace minkowski
