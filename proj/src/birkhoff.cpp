#include "minkowski/birkhoff.hpp"

#include <cmath>

#include "minkowski/legendre.hpp"
#include "minkowski/line_search.hpp"

namespace minkowski {

LineSearchWitness birkhoff_line_search(const Norm& N, const Vector& x, const Vector& y) {
  const double nx = N(x);
  const double ny = N(y);
  if (ny == 0.0) return {0.0, 0.0};
  const double bound = 2.0 * nx / ny;
  const LineMinimum m = golden_section([&](double t) { return N(x + t * y); }, -bound, bound);
  // t = 0 is always feasible, so the gap is never negative.
  if (m.value >= nx) return {0.0, 0.0};
  return {m.t, nx - m.value};
}

OrthogonalityReport birkhoff_vv(const Norm& N, const Vector& x, const Vector& y, const Tolerances& tol) {
  require_dimension(N.dimension(), static_cast<int>(x.size()), "birkhoff x");
  require_dimension(N.dimension(), static_cast<int>(y.size()), "birkhoff y");
  if (N(x) == 0.0) throw DomainError("Birkhoff orthogonality is undefined for x = 0");
  OrthogonalityReport report;
  const double ny = N(y);
  if (ny == 0.0) {
    report.holds = true;
    return report;
  }
  report.residual = std::abs(legendre(N, x)(y)) / (N(x) * ny);
  report.holds = report.residual <= tol.eq_tol;
  const LineSearchWitness w = birkhoff_line_search(N, x, y);
  report.witness_t = w.t;
  report.variational_gap = w.gap;
  return report;
}

OrthogonalityReport birkhoff_vh(const Norm& N, const Vector& x, const Hyperplane& h, const Tolerances& tol) {
  require_dimension(N.dimension(), h.dimension(), "birkhoff hyperplane");
  if (!h.through_origin()) throw DomainError("birkhoff_vh expects a hyperplane through the origin");
  OrthogonalityReport worst;
  worst.holds = true;
  bool first = true;
  for (const Vector& z : h.basis()) {
    OrthogonalityReport r = birkhoff_vv(N, x, z, tol);
    if (first || r.residual > worst.residual) {
      const bool holds = worst.holds && r.holds;
      worst = r;
      worst.holds = holds;
      first = false;
    } else {
      worst.holds = worst.holds && r.holds;
    }
  }
  if (first && N(x) == 0.0) throw DomainError("Birkhoff orthogonality is undefined for x = 0");
  return worst;
}

Vector left_orthogonal_direction(const Norm& N, const Hyperplane& h, const Tolerances& tol) {
  require_dimension(N.dimension(), h.dimension(), "left_orthogonal_direction hyperplane");
  const Vector x = legendre_inverse(N, h.normal(), tol);
  return x / N(x);
}

}  // namespace minkowski
