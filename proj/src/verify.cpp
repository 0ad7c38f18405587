#include "minkowski/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "minkowski/cli.hpp"
#include "minkowski/legendre.hpp"
#include "minkowski/testbed.hpp"

namespace minkowski {

namespace {

using testbed::NamedBody;
using testbed::NamedNorm;

// Central-difference step for d_K at x with projection p. A norm with p < 2
// is not C^2 where a coordinate of x - p vanishes, so the step stays well
// below the smallest nonzero coordinate.
double fd_step_for_distance(const Vector& x, const Vector& p) {
  const double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
  double h = 1e-6 * scale;
  for (const double w : (x - p).cwiseAbs()) {
    if (w > 0.0) h = std::min(h, 1e-2 * w);
  }
  return std::max(h, 1e-9 * scale);
}

std::string str(const Vector& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << "]";
  return os.str();
}

class Recorder {
 public:
  explicit Recorder(VerifyReport& r) : r_(r) {}

  // Records one case; the input description is only built on failure.
  void check(bool ok, const char* invariant, const std::function<std::string()>& inputs, double observed,
             const std::string& expected) {
    ++r_.cases_run;
    if (ok) return;
    r_.failures.push_back({invariant, inputs(), observed, expected});
  }

  // Runs `body`, turning a thrown library error into a failure.
  void guard(const char* invariant, const std::function<std::string()>& inputs, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      ++r_.cases_run;
      r_.failures.push_back({invariant, inputs() + " threw: " + e.what(), std::nan(""), "no exception"});
    }
  }

 private:
  VerifyReport& r_;
};

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

// ---------------------------------------------------------------- core

void suite_core(Recorder& rec, std::uint64_t seed) {
  CounterRng rng(seed, 1);
  for (int k = 0; k < 200; ++k) {
    const int n = testbed::kDimensions[k % 3];
    const Functional phi(rng.normal_vector(n));
    const Functional psi(rng.normal_vector(n));
    const Vector x = rng.normal_vector(n);
    const Vector y = rng.normal_vector(n);
    const double a = rng.uniform(-3, 3);
    const double b = rng.uniform(-3, 3);
    const double lhs = phi(a * x + b * y);
    const double rhs = a * phi(x) + b * phi(y);
    const double scale = 1.0 + std::abs(a * phi(x)) + std::abs(b * phi(y));
    rec.check(std::abs(lhs - rhs) <= 1e-12 * scale, "functional linear in the vector",
              [&] { return "x=" + str(x) + " y=" + str(y); }, std::abs(lhs - rhs) / scale, "<= 1e-12 relative");
    const double l2 = (a * phi + b * psi)(x);
    const double r2 = a * phi(x) + b * psi(x);
    const double s2 = 1.0 + std::abs(a * phi(x)) + std::abs(b * psi(x));
    rec.check(std::abs(l2 - r2) <= 1e-12 * s2, "functional linear in the coefficients",
              [&] { return "x=" + str(x); }, std::abs(l2 - r2) / s2, "<= 1e-12 relative");
    const Bidual J = canonical_embed(a * x + y);
    const double jl = J(phi);
    const double jr = a * canonical_embed(x)(phi) + canonical_embed(y)(phi);
    rec.check(std::abs(jl - jr) <= 1e-12 * (1.0 + std::abs(jl) + std::abs(jr)), "canonical_embed linear",
              [&] { return "x=" + str(x) + " y=" + str(y); }, std::abs(jl - jr), "<= 1e-12 relative");
  }
  for (int n : testbed::kDimensions) {
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M(i, j) = canonical_embed(Vector::Unit(n, i))(Functional(Vector::Unit(n, j)));
    const double dev = (M - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    rec.check(dev == 0.0, "canonical_embed injective on a basis", [&] { return "n=" + std::to_string(n); }, dev,
              "J(e_i)(e_j*) = delta_ij");
  }
}

// ---------------------------------------------------------------- norms

void suite_norms(Recorder& rec, std::uint64_t seed) {
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      CounterRng rng(seed, 100 + static_cast<std::uint64_t>(n));
      auto tag = [&](const Vector& x) { return nn.name + " x=" + str(x); };
      for (int k = 0; k < 200; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        const Functional g = norm_grad(N, x);
        const double euler = std::abs(g(x) - N(x)) / N(x);
        rec.check(euler <= 1e-7, "Euler relation", [&] { return tag(x); }, euler, "<= 1e-7 relative");

        // p < 2 norms are not C^2 across coordinate hyperplanes, so the step
        // stays below the smallest nonzero coordinate.
        double h = 1e-6 * x.norm();
        for (const double xi : x.cwiseAbs()) {
          if (xi > 0.0) h = std::min(h, 1e-2 * xi);
        }
        h = std::max(h, 1e-10 * x.norm());
        const Eigen::VectorXd fd = central_difference_gradient([&](const Vector& y) { return N(y); }, x, h);
        const double dev = (fd - g.coeffs()).cwiseAbs().maxCoeff();
        rec.check(dev <= 1e-5, "gradient vs central differences", [&] { return tag(x); }, dev, "<= 1e-5");

        for (double a : {0.5, 3.0}) {
          const double h = (norm_grad(N, a * x).coeffs() - g.coeffs()).cwiseAbs().maxCoeff();
          rec.check(h <= N.tolerances().eq_tol, "gradient 0-homogeneous", [&] { return tag(x); }, h, "<= eq_tol");
        }
      }
      for (int k = 0; k < 20; ++k) {
        const Vector x = testbed::random_vector(n, rng, 0.5, 2.0);
        const Vector e = rng.unit_vector(n);
        const Eigen::VectorXd g0 = norm_grad(N, x).coeffs();
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        double last = 0.0;
        for (int j = 1; j <= 6; ++j) {
          const double d = (norm_grad(N, x + std::pow(10.0, -j) * e).coeffs() - g0).cwiseAbs().maxCoeff();
          monotone = monotone && d <= prev + 1e-12;
          prev = d;
          last = d;
        }
        rec.check(monotone && last <= 1e-3, "gradient continuous", [&] { return tag(x) + " e=" + str(e); }, last,
                  "monotone decrease, <= 1e-3 at delta = 1e-6");
      }
    }
  }
  // Custom oracle reproduces the built-in p = 4 norm.
  const Norm P = Norm::p_norm(4.0, 3);
  const Norm C = Norm::custom(3, [P](const Vector& x) { return P(x); });
  CounterRng rng(seed, 199);
  for (int k = 0; k < 50; ++k) {
    const Vector x = testbed::random_vector(3, rng);
    const double dev = (norm_grad(C, x).coeffs() - norm_grad(P, x).coeffs()).cwiseAbs().maxCoeff();
    rec.check(dev <= 1e-6, "custom norm gradient", [&] { return "x=" + str(x); }, dev, "<= 1e-6");
  }
}

// ---------------------------------------------------------------- legendre

void suite_legendre(Recorder& rec, std::uint64_t seed) {
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      const double eq = N.tolerances().eq_tol;
      CounterRng rng(seed, 200 + static_cast<std::uint64_t>(n));
      auto tag = [&](const Vector& x) { return nn.name + " x=" + str(x); };
      for (int k = 0; k < 1000; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        const Functional Lx = legendre(N, x);
        for (double a : {-2.0, -0.5, 0.5, 3.0}) {
          const double d = (legendre(N, a * x).coeffs() - a * Lx.coeffs()).cwiseAbs().maxCoeff();
          rec.check(d <= eq * (1.0 + std::abs(a) * x.norm()), "L homogeneous", [&] { return tag(x); }, d,
                    "<= eq_tol (1 + |a| |x|)");
        }
        const double dn = std::abs(dual_norm(N, Lx) - N(x));
        rec.check(dn <= 1e-6, "L norm preserving", [&] { return tag(x); }, dn, "<= 1e-6");
        const double pair = rel(Lx(x), N(x) * N(x));
        rec.check(pair <= 1e-6, "L(x)x = |x|^2", [&] { return tag(x); }, pair, "<= 1e-6 relative");
        const double rt = (legendre_inverse(N, Lx) - x).norm() / (1.0 + x.norm());
        rec.check(rt <= 1e-6, "L^-1 L = id", [&] { return tag(x); }, rt, "<= 1e-6 relative");
        const Functional phi(rng.normal_vector(n));
        const double rt2 = (legendre(N, legendre_inverse(N, phi)).coeffs() - phi.coeffs()).norm() /
                           (1.0 + phi.coeffs().norm());
        rec.check(rt2 <= 1e-6, "L L^-1 = id", [&] { return nn.name + " phi=" + str(Vector(phi.coeffs())); }, rt2,
                  "<= 1e-6 relative");
      }
      for (int k = 0; k < 100; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        const auto ker = kernel_basis(legendre(N, x));
        Vector z = Vector::Zero(n);
        for (const Vector& b : ker) z += rng.normal() * b;
        double worst = 0.0;
        for (double t : {1e-3, 1e-2, 0.1, 1.0})
          for (double s : {-1.0, 1.0}) worst = std::max(worst, N(x) - N(x + s * t * z));
        rec.check(worst <= eq * (1.0 + N(x)), "kernel of L(x) is right-orthogonal", [&] { return tag(x); }, worst,
                  "<= eq_tol");
      }
      for (int k = 0; k < 200; ++k) {
        const Functional phi(rng.normal_vector(n));
        const Bidual B = legendre_of_dual(N, phi);
        const Vector x = legendre_inverse(N, phi);
        double worst = 0.0;
        for (int j = 0; j < 5; ++j) {
          const Functional psi(rng.normal_vector(n));
          worst = std::max(worst, std::abs(B(psi) - canonical_embed(x)(psi)));
        }
        rec.check(worst <= 1e-5, "L* = J L^-1", [&] { return nn.name + " phi=" + str(Vector(phi.coeffs())); }, worst,
                  "<= 1e-5");
      }
      for (int k = 0; k < 20; ++k) {
        const Vector x0 = rng.unit_vector(n);
        const Vector x = x0 / N(x0);
        std::vector<Vector> probes;
        for (int j = 0; j < 8; ++j) probes.push_back(rng.unit_vector(n));
        const Functional Lx = legendre(N, x);
        double prev = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (double d : {1e-2, 1e-3, 1e-4}) {
          double s = 0.0;
          for (const Vector& e : probes) {
            const Functional D = legendre(N, x + d * e) - Lx;
            for (const Vector& u : probes) s = std::max(s, std::abs(D(u / N(u))));
          }
          ok = ok && s <= prev;
          prev = s;
        }
        rec.check(ok, "L continuous", [&] { return tag(x); }, prev, "decreasing in delta");
      }
    }
  }
}

// ---------------------------------------------------------------- birkhoff

void suite_birkhoff(Recorder& rec, std::uint64_t seed) {
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      const double eq = N.tolerances().eq_tol;
      CounterRng rng(seed, 300 + static_cast<std::uint64_t>(n));
      for (int k = 0; k < 1000; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        Vector y;
        if (k % 2 == 0) {
          y = Vector::Zero(n);
          for (const Vector& b : kernel_basis(legendre(N, x))) y += rng.normal() * b;
        } else {
          y = testbed::random_vector(n, rng);
        }
        const OrthogonalityReport r = birkhoff_vv(N, x, y);
        const bool algebraic = r.residual <= 10.0 * eq;
        const bool variational = r.variational_gap <= 1e-14 * N(x);
        const bool banded = r.residual > 10.0 * eq && r.residual < 1e-5;
        rec.check(banded || algebraic == variational, "algebraic vs line-search orthogonality",
                  [&] { return nn.name + " x=" + str(x) + " y=" + str(y); }, r.residual,
                  "verdicts agree outside residual band (1e-7, 1e-5)");
        if (k % 10 == 0) {
          bool same = true;
          for (double a : {-2.0, 0.5, 3.0})
            for (double b : {-1.5, 0.25, 4.0}) same = same && birkhoff_vv(N, a * x, b * y).holds == r.holds;
          rec.check(same, "orthogonality homogeneous", [&] { return nn.name + " x=" + str(x) + " y=" + str(y); },
                    r.residual, "same verdict for (ax, by)");
        }
      }
      for (int k = 0; k < 50; ++k) {
        std::vector<Vector> span;
        for (int j = 0; j + 1 < n; ++j) span.push_back(rng.normal_vector(n));
        const Hyperplane h = Hyperplane::spanned_by(span);
        const Vector x = left_orthogonal_direction(N, h);
        const OrthogonalityReport r = birkhoff_vh(N, x, h);
        rec.check(r.holds, "left_orthogonal_direction is left-orthogonal",
                  [&] { return nn.name + " normal=" + str(Vector(h.normal().coeffs())); }, r.residual, "<= eq_tol");
      }
    }
  }
  // Closed form vs sphere ascent on an equivalent custom oracle.
  for (int n : {2, 3}) {
    const Norm P = Norm::p_norm(4.0, n);
    const Norm C = Norm::custom(n, [P](const Vector& x) { return P(x); });
    CounterRng rng(seed, 390 + static_cast<std::uint64_t>(n));
    for (int k = 0; k < 20; ++k) {
      std::vector<Vector> span;
      for (int j = 0; j + 1 < n; ++j) span.push_back(rng.normal_vector(n));
      const Hyperplane h = Hyperplane::spanned_by(span);
      const double d = (left_orthogonal_direction(P, h) - left_orthogonal_direction(C, h)).norm();
      rec.check(d <= 1e-6, "left_orthogonal_direction unique",
                [&] { return "p4 normal=" + str(Vector(h.normal().coeffs())); }, d, "<= 1e-6");
    }
  }
}

// ---------------------------------------------------------------- bodies

std::vector<Vector> boundary_points(const ConvexBody& K) {
  std::vector<Vector> out;
  const auto* P = std::get_if<body_kind::Polytope>(&K.kind());
  if (P == nullptr) return out;
  for (const Vector& v : P->vertices) out.push_back(v);
  for (const auto& facet : P->facet_vertices) {
    Vector m = Vector::Zero(K.dimension());
    for (int i : facet) m += P->vertices[static_cast<std::size_t>(i)];
    out.push_back(m / static_cast<double>(facet.size()));
  }
  return out;
}

void suite_bodies(Recorder& rec, std::uint64_t seed) {
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      const double eq = N.tolerances().eq_tol;
      for (const NamedBody& nb : testbed::bodies(n, N)) {
        const ConvexBody& K = nb.body;
        const std::string where = nn.name + "/" + nb.name;
        CounterRng rng(seed, 400 + static_cast<std::uint64_t>(n));
        for (int k = 0; k < 50; ++k) {
          const Functional phi(rng.normal_vector(n));
          const double s = K.support(phi);
          const double d = std::abs(s - phi(K.argmax(phi)));
          rec.check(d <= eq * (1.0 + std::abs(s)), "support/argmax consistent", [&] { return where; }, d, "<= eq_tol");
        }
        std::vector<Functional> phis;
        for (int j = 0; j < 200; ++j) phis.emplace_back(rng.normal_vector(n));
        for (int k = 0; k < 20; ++k) {
          const Vector x = k % 2 ? testbed::sample_body(K, rng) : testbed::exterior_point(K, rng, 0.3, 1.5);
          if (K.contains(x)) {
            double worst = -std::numeric_limits<double>::infinity();
            for (const Functional& phi : phis) worst = std::max(worst, phi(x) - K.support(phi));
            rec.check(worst <= eq * (1.0 + x.norm()), "member below every support value",
                      [&] { return where + " x=" + str(x); }, worst, "<= eq_tol");
          } else if (const auto* P = std::get_if<body_kind::Polytope>(&K.kind())) {
            const double sep = (P->facet_normals * x - P->facet_offsets).maxCoeff();
            rec.check(sep > 0.0, "non-member separated by a facet", [&] { return where + " x=" + str(x); }, sep, "> 0");
          }
        }
        const ConvexBody Pb = parallel_body(K, 0.5, N);
        for (int k = 0; k < 30; ++k) {
          const Vector x = testbed::exterior_point(K, rng, 0.5, 1.8);
          const double d = distance(N, K, x);
          if (std::abs(d - 0.5) <= 10.0 * eq) continue;
          rec.check(Pb.contains(x) == (d <= 0.5), "parallel body = sub-level set of d_K",
                    [&] { return where + " x=" + str(x); }, d, "membership iff d <= 0.5");
        }
        for (const Vector& z : boundary_points(K)) {
          const NormalCone nc = normal_cone(K, z, N);
          for (int j = 0; j < 10; ++j) {
            const Vector v = rng.normal_vector(n);
            if (std::abs(nc.membership_slack(v)) <= 1e-9) continue;
            const bool a = nc.contains(v);
            rec.check(a == nc.contains(0.1 * v) && a == nc.contains(7.0 * v), "normal cone positively homogeneous",
                      [&] { return where + " z=" + str(z) + " v=" + str(v); }, nc.membership_slack(v),
                      "same verdict for positive multiples");
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------- projection

void suite_projection(Recorder& rec, std::uint64_t seed) {
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      const double eq = N.tolerances().eq_tol;
      for (const NamedBody& nb : testbed::bodies(n, N)) {
        const ConvexBody& K = nb.body;
        const std::string where = nn.name + "/" + nb.name;
        CounterRng rng(seed, 500 + static_cast<std::uint64_t>(n));
        std::vector<Vector> samples;
        for (int j = 0; j < 500; ++j) samples.push_back(testbed::sample_body(K, rng));
        const auto* P = std::get_if<body_kind::Polytope>(&K.kind());
        for (int k = 0; k < 100; ++k) {
          const Vector x = testbed::exterior_point(K, rng);
          auto tag = [&] { return where + " x=" + str(x); };
          rec.guard("projection", tag, [&] {
            const ProjectionResult r = project(N, K, x);
            rec.check(r.certified, "projection certified", tag, r.gap, "gap <= opt_gap min(1, d^2)");
            if (k < 20) {
              double worst = -std::numeric_limits<double>::infinity();
              for (const Vector& y : samples) worst = std::max(worst, r.distance - N(x - y));
              rec.check(worst <= 10.0 * eq, "projection beats body samples", tag, worst, "<= 10 eq_tol");
              if (P != nullptr) {
                const Functional L = legendre(N, x - r.point);
                double lo = -std::numeric_limits<double>::infinity();
                for (const Vector& y : P->vertices) lo = std::max(lo, L(y - r.point));
                rec.check(lo <= 10.0 * eq, "x - p_K(x) left-orthogonal to K - p_K(x)", tag, lo, "<= 10 eq_tol");
              }
            }
            // grad d_K = eta_K by central differences.
            const Functional Leta = legendre(N, *r.outer_normal);
            const double h = fd_step_for_distance(x, r.point);
            double dev = 0.0;
            for (int i = 0; i < n; ++i) {
              const Vector e = Vector::Unit(n, i);
              const double fd = (distance(N, K, x + h * e) - distance(N, K, x - h * e)) / (2 * h);
              dev = std::max(dev, std::abs(fd - Leta(e)));
            }
            rec.check(dev <= std::max(1e-4, 100 * N.tolerances().fd_step), "grad d_K = eta_K", tag, dev,
                      "<= max(1e-4, 100 fd_step)");
            if (k < 20) {
              for (double t : {0.5, 2.0, 10.0})
                rec.check(sun_check(N, K, x, t), "sun property", tag, t, "p_K(p + t eta) = p within 10 eq_tol");
              // Continuity of p_K and eta_K. The differences need not shrink
              // at every step (eta saturates once x + delta e crosses into the
              // region of another face), only overall.
              const Vector e = rng.unit_vector(n);
              double dp[3];
              double de[3];
              int j = 0;
              for (double d : {1e-1, 1e-2, 1e-3}) {
                const ProjectionResult q = project(N, K, x + d * e);
                dp[j] = N(q.point - r.point);
                de[j++] = N(*q.outer_normal - *r.outer_normal);
              }
              const bool ok = dp[2] <= dp[0] + 1e-9 && de[2] <= de[0] + 1e-9;
              rec.check(ok && dp[2] <= 1e-2 && de[2] <= 1e-2, "p_K and eta_K continuous", tag, std::max(dp[2], de[2]),
                        "<= 1e-2 at delta 1e-3 and below the value at 1e-1");
            }
          });
        }
        for (int k = 0; k < 40; ++k) {
          const Vector x = testbed::exterior_point(K, rng, 0.0, 2.0);
          const Vector y = testbed::exterior_point(K, rng, 0.0, 2.0);
          const double lam = rng.uniform();
          const double dx = distance(N, K, x);
          const double dy = distance(N, K, y);
          const double c = std::abs(dx - dy) - N(x - y);
          rec.check(c <= 10.0 * eq, "d_K weak contraction", [&] { return where + " x=" + str(x) + " y=" + str(y); }, c,
                    "<= 10 eq_tol");
          const double v = distance(N, K, lam * x + (1 - lam) * y) - lam * dx - (1 - lam) * dy;
          rec.check(v <= 10.0 * eq, "d_K convex", [&] { return where + " x=" + str(x) + " y=" + str(y); }, v,
                    "<= 10 eq_tol");
        }
      }
    }
  }
}

// ---------------------------------------------------------------- subdifferential

struct TestFunction {
  std::string name;
  ConvexFunction f;
  Norm norm;
  std::vector<Vector> points;
  bool differentiable;  // at every listed point
};

std::vector<TestFunction> smooth_functions(int n, CounterRng& rng) {
  std::vector<TestFunction> out;
  for (const NamedNorm& nn : testbed::builtin_norms(n)) {
    std::vector<Vector> pts;
    for (int k = 0; k < 4; ++k) pts.push_back(testbed::random_vector(n, rng, 0.3, 3.0));
    out.push_back({"rho/" + nn.name, ConvexFunction::norm_function(nn.norm), nn.norm, pts, true});
    out.push_back({"half_sq/" + nn.name, ConvexFunction::half_squared_norm(nn.norm), nn.norm, pts, true});
    for (const NamedBody& nb : testbed::polytopes(n)) {
      if (n == 5) continue;
      std::vector<Vector> ext;
      for (int k = 0; k < 3; ++k) ext.push_back(testbed::exterior_point(nb.body, rng));
      out.push_back({"d_" + nb.name + "/" + nn.name, ConvexFunction::distance_to(nb.body, nn.norm), nn.norm, ext, true});
    }
  }
  return out;
}

void suite_subdifferential(Recorder& rec, std::uint64_t seed) {
  // Function invariants, gradient inequality, singleton sub-differential.
  for (int n : testbed::kDimensions) {
    CounterRng rng(seed, 600 + static_cast<std::uint64_t>(n));
    for (const TestFunction& tf : smooth_functions(n, rng)) {
      const double eq = tf.f.tolerances().eq_tol;
      for (const Vector& x : tf.points) {
        auto tag = [&] { return tf.name + " x=" + str(x); };
        rec.guard("smooth function invariants", tag, [&] {
          const Vector a = rng.normal_vector(n);
          const Vector b = rng.normal_vector(n);
          const double lam = rng.uniform();
          const Vector y = x + rng.normal_vector(n);
          const double conv = tf.f(lam * x + (1 - lam) * y) - lam * tf.f(x) - (1 - lam) * tf.f(y);
          rec.check(conv <= eq * (1.0 + std::abs(tf.f(x)) + std::abs(tf.f(y))), "convexity spot check", tag, conv,
                    "<= eq_tol");
          const double fa = dir_deriv_plus(tf.f, x, a);
          const double hom = std::abs(dir_deriv_plus(tf.f, x, 2.5 * a) - 2.5 * fa);
          rec.check(hom <= 1e-6 * (1.0 + std::abs(fa)), "f'+ positively homogeneous", tag, hom, "<= 1e-6");
          const double sub = dir_deriv_plus(tf.f, x, a + b) - fa - dir_deriv_plus(tf.f, x, b);
          rec.check(sub <= 1e-6 * (1.0 + std::abs(fa)), "f'+ sub-additive", tag, sub, "<= 1e-6");
          const double mm = std::abs(dir_deriv_minus(tf.f, x, a) + dir_deriv_plus(tf.f, x, -a));
          rec.check(mm == 0.0, "f'- = -f'+(-v)", tag, mm, "== 0");

          const Vector g = norm_gradient(tf.f, x, tf.norm);
          const Functional Lg = legendre(tf.norm, g);
          double worst = -std::numeric_limits<double>::infinity();
          for (int j = 0; j < 20; ++j) {
            const Vector z = x + testbed::random_vector(n, rng, 0.01, 3.0);
            worst = std::max(worst, Lg(z - x) - (tf.f(z) - tf.f(x)));
          }
          rec.check(worst <= 10.0 * eq * (1.0 + std::abs(tf.f(x))), "gradient inequality", tag, worst,
                    "<= 10 eq_tol");

          double spread = 0.0;
          for (int j = 0; j < 16; ++j) {
            const Vector w = subgradient_construct(tf.f, x, rng.normal_vector(n), tf.norm);
            spread = std::max(spread, (w - g).norm() / (1.0 + g.norm()));
          }
          rec.check(spread <= 1e-6, "singleton sub-differential at differentiable points", tag, spread,
                    "construct = norm_gradient within 1e-6");
        });
      }
    }
  }

  // Max formula and chain invariants on max-affine functions.
  CounterRng rng(seed, 650);
  for (int k = 0; k < 20; ++k) {
    const int n = testbed::kDimensions[k % 3];
    const NamedNorm nn = testbed::builtin_norms(n)[static_cast<std::size_t>(k % 4)];
    const Vector x0 = rng.normal_vector(n);
    const int pieces = 2 + k % 7;
    const ConvexFunction f = testbed::random_max_affine(n, pieces, 1 + k % std::min(pieces, n + 1), x0, rng);
    for (int j = 0; j < 5; ++j) {
      const Vector u = rng.normal_vector(n);
      auto tag = [&] { return nn.name + " instance " + std::to_string(k) + " u=" + str(u); };
      rec.guard("max formula", tag, [&] {
        const SublinearChain ch = subgradient_construct_chain(f, x0, u, nn.norm);
        const double gap = std::abs(legendre(nn.norm, ch.subgradient)(u) - dir_deriv_plus(f, x0, u));
        rec.check(gap <= 1e-8 * (1.0 + u.norm()), "max formula", tag, gap, "<= 1e-8");
        const auto cert = subgradient_member(f, x0, ch.subgradient, nn.norm);
        rec.check(cert.verdict == Verdict::member, "constructed sub-gradient certified", tag, cert.margin, "member");
        for (std::size_t m = 0; m < ch.g.size(); ++m) {
          const Vector a = rng.normal_vector(n);
          const Vector b = rng.normal_vector(n);
          const double ga = ch.g[m](a);
          const double hom = std::abs(ch.g[m](3.0 * a) - 3.0 * ga);
          const double sub = ch.g[m](a + b) - ga - ch.g[m](b);
          rec.check(hom <= 1e-12 * (1 + std::abs(ga)) && sub <= 1e-12 * (1 + std::abs(ga)), "g_m sub-linear", tag,
                    std::max(hom, sub), "<= 1e-12");
          double lin = 0.0;
          for (std::size_t i = 0; i < m; ++i)
            lin = std::max(lin, std::abs(ch.g[m](ch.basis[i]) + ch.g[m](-ch.basis[i])));
          rec.check(lin <= 1e-12, "g_m linear on e_1..e_m", tag, lin, "<= 1e-12");
          if (m > 0) rec.check(ch.g[m](a) <= ch.g[m - 1](a) + 1e-12, "g_m <= g_{m-1}", tag, ch.g[m](a) - ch.g[m - 1](a), "<= 0");
        }
      });
    }
  }

  // Nonempty sub-differential, sub-gradient inequality and the estimate
  // chain at kinks: max-affine kinks, polytope boundaries, the origin of rho.
  for (int n : {2, 3}) {
    CounterRng r2(seed, 660 + static_cast<std::uint64_t>(n));
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      std::vector<std::pair<std::string, std::pair<ConvexFunction, Vector>>> cases;
      cases.push_back({"rho at 0", {ConvexFunction::norm_function(nn.norm), Vector::Zero(n)}});
      const Vector x0 = r2.normal_vector(n);
      cases.push_back({"max-affine kink", {testbed::random_max_affine(n, 5, 3, x0, r2), x0}});
      for (const NamedBody& nb : testbed::polytopes(n)) {
        const auto& P = std::get<body_kind::Polytope>(nb.body.kind());
        cases.push_back({"d_" + nb.name + " vertex", {ConvexFunction::distance_to(nb.body, nn.norm), P.vertices.front()}});
      }
      for (const auto& [name, fx] : cases) {
        const auto& [f, x] = fx;
        auto tag = [&, &name = name] { return nn.name + " " + name + " x=" + str(x); };
        rec.guard("nonempty sub-differential", tag, [&] {
          for (int j = 0; j < 3; ++j) {
            const Vector u = r2.normal_vector(n);
            const Vector w = subgradient_construct(f, x, u, nn.norm);
            rec.check(true, "nonempty sub-differential", tag, 0.0, "construct succeeds");
            const Functional Lw = legendre(nn.norm, w);
            double worst = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < 500; ++i) {
              const Vector y = x + testbed::random_vector(n, r2, 0.01, 3.0);
              worst = std::max(worst, Lw(y - x) - (f(y) - f(x)) - kConstructTolerance * (1.0 + (y - x).norm()));
            }
            rec.check(worst <= 0.0, "sub-gradient inequality", tag, worst, "<= 0 (tolerance 1e-4 scale)");
            if (w.norm() > 1e-12) {
              const EstimateReport e = estimate_check(f, x, w, nn.norm, 64, seed);
              rec.check(e.slack >= -1e-6 * std::max(1.0, e.lower), "estimate chain at sub-gradients", tag, e.slack,
                        ">= -1e-6");
            }
          }
        });
      }
    }
  }

  // Boundary sub-differential of d_K versus the normal cone.
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      for (const NamedBody& nb : testbed::polytopes(n)) {
        const ConvexFunction d = ConvexFunction::distance_to(nb.body, nn.norm);
        CounterRng r3(seed, 700 + static_cast<std::uint64_t>(n));
        for (const Vector& z : boundary_points(nb.body)) {
          const NormalCone nc = normal_cone(nb.body, z, nn.norm);
          const SubgradientTester tester(d, z, nn.norm, 64, seed);
          int disagreements = 0;
          double worst = 0.0;
          for (int j = 0; j < 200; ++j) {
            // Even probes are nonnegative combinations of the generators, odd
            // ones generic. Cone members sit at slack 0, so only generic
            // probes just outside the cone are skipped.
            const bool in_cone = j % 2 == 0;
            Vector v = Vector::Zero(n);
            if (in_cone) {
              for (const Vector& g : nc.generators()) v += r3.uniform() * g;
            } else {
              v = r3.normal_vector(n);
            }
            if (nn.norm(v) < 1e-12) continue;
            v *= 0.5 / nn.norm(v);
            const double slack = nc.membership_slack(v);
            if (!in_cone && slack > 0.0 && slack <= 1e-6) continue;
            const auto cert = tester.test(v);
            if ((cert.verdict == Verdict::member) != nc.contains(v) || (in_cone && !nc.contains(v))) {
              ++disagreements;
              worst = std::max(worst, std::abs(slack));
            }
          }
          rec.check(disagreements == 0, "R+ sub-differential of d_K = normal cone",
                    [&] { return nn.name + "/" + nb.name + " z=" + str(z); }, disagreements, "0 disagreements");
        }
      }
    }
  }

  // Rockafellar round trip and rejection of non-monotone data.
  CounterRng r4(seed, 800);
  for (int k = 0; k < 50; ++k) {
    const int n = k % 2 ? 3 : 2;
    const NamedNorm nn = testbed::builtin_norms(n)[static_cast<std::size_t>(k % 4)];
    const int m = 2 + k % 11;
    const ConvexFunction g = k % 3 == 0 ? ConvexFunction::half_squared_norm(nn.norm)
                                        : testbed::random_max_affine(n, 6, 1, r4.normal_vector(n), r4);
    MonotoneData S;
    for (int i = 0; i < m; ++i) {
      const Vector x = 2.0 * r4.normal_vector(n);
      Vector w;
      if (const auto* ma = std::get_if<function_kind::MaxAffine>(&g.kind())) {
        const int a = active_pieces(*ma, x, 0.0).front();
        w = legendre_inverse(nn.norm, ma->pieces[static_cast<std::size_t>(a)].phi);
      } else {
        w = x;
      }
      S.pairs.push_back({x, w});
    }
    S.base_index = k % m;
    auto tag = [&] { return nn.name + " set " + std::to_string(k); };
    rec.guard("rockafellar", tag, [&] {
      const ConvexFunction f = rockafellar_potential(S, nn.norm);
      const double fb = std::abs(f(S.pairs[static_cast<std::size_t>(S.base_index)].x));
      rec.check(fb <= 1e-9, "potential vanishes at the base point", tag, fb, "<= 1e-9");
      bool all = true;
      for (const auto& p : S.pairs) all = all && subgradient_member(f, p.x, p.w, nn.norm).verdict == Verdict::member;
      rec.check(all, "S inside the sub-differential of the potential", tag, 0.0, "every pair member");

      MonotoneData bad = S;
      const int i = 0;
      const int j = 1;
      const Vector dx = bad.pairs[j].x - bad.pairs[i].x;
      bad.pairs[i].w = legendre_inverse(nn.norm, legendre(nn.norm, bad.pairs[j].w) + legendre(nn.norm, dx));
      const MonotoneReport rep = cyclic_monotone_check(bad, nn.norm);
      const double w = rep.worst_cycle.empty() ? 0.0 : cycle_weight(bad, nn.norm, rep.worst_cycle);
      rec.check(!rep.ok && w > 0.0, "non-monotone data rejected with a positive cycle", tag, w, "> 0");
    });
  }

  // Norm regularity.
  for (int n : testbed::kDimensions) {
    for (const NamedNorm& nn : testbed::builtin_norms(n)) {
      const ConvexFunction rho = ConvexFunction::norm_function(nn.norm);
      CounterRng r5(seed, 900 + static_cast<std::uint64_t>(n));
      for (int k = 0; k < 500; ++k) {
        const Vector x = testbed::random_vector(n, r5);
        const double d = (norm_gradient(rho, x, nn.norm) - x / nn.norm(x)).cwiseAbs().maxCoeff();
        rec.check(d <= 1e-6, "grad rho = x / rho(x)", [&] { return nn.name + " x=" + str(x); }, d, "<= 1e-6");
      }
    }
  }
}

// ---------------------------------------------------------------- cli

void suite_cli(Recorder& rec, std::uint64_t seed) {
  const std::string square = R"({"type":"polytope","vertices":[[1,1],[1,-1],[-1,1],[-1,-1]]})";
  const std::string p4 = R"({"type":"p","p":4})";
  const std::string maxabs = R"({"type":"max_affine","pieces":[{"phi":[1,0],"b":0},{"phi":[-1,0],"b":0}]})";
  const std::vector<std::vector<std::string>> commands = {
      {"norm", "--norm", p4, "--x", "1,1"},
      {"legendre", "--norm", "euclidean", "--x", "3,4"},
      {"birkhoff", "--norm", p4, "--x", "1,1", "--y", "1,-1"},
      {"project", "--norm", p4, "--body", square, "--x", "3,0"},
      {"distance", "--norm", p4, "--body", square, "--x", "3,1"},
      {"subdiff", "check", "--norm", "euclidean", "--f", maxabs, "--x", "0,0", "--v", "0.5,0"},
      {"subdiff", "construct", "--norm", "euclidean", "--f", maxabs, "--x", "0,0", "--u", "1,0"},
      {"rockafellar", "--norm", "euclidean", "--pairs", R"([{"x":[0,0],"w":[0,0]},{"x":[1,0],"w":[1,0]}])"},
      {"levelset", "--norm", p4, "--body", square, "--levels", "0.5,1", "--samples", "16"},
  };
  (void)seed;
  for (const auto& args : commands) {
    auto tag = [&] {
      std::string s;
      for (const auto& a : args) s += a + " ";
      return s;
    };
    std::ostringstream out1, out2, err;
    const int c1 = cli::run(args, out1, err);
    const int c2 = cli::run(args, out2, err);
    rec.check(c1 == 0 && c2 == 0, "CLI command succeeds", tag, c1, "exit 0");
    rec.check(out1.str() == out2.str(), "CLI output deterministic", tag, 0.0, "byte-identical output");
    if (args.front() == "levelset") continue;
    bool reparses = true;
    try {
      const io::Json j = io::Json::parse(out1.str());
      for (const char* key : {"point", "gradient", "subgradient", "candidate", "x", "outer_normal"})
        if (j.contains(key) && j[key].is_array()) io::vector_from_json(j[key], key);
      for (const char* key : {"L", "differential"})
        if (j.contains(key)) io::functional_from_json(j[key], key);
      if (j.contains("f")) io::function_from_json(j["f"], Norm::euclidean(2));
    } catch (const std::exception&) {
      reparses = false;
    }
    rec.check(reparses, "CLI output re-parses", tag, 0.0, "valid JSON under the scenario schema");
  }
}

using SuiteFn = void (*)(Recorder&, std::uint64_t);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"core", suite_core},           {"norms", suite_norms},
      {"legendre", suite_legendre},   {"birkhoff", suite_birkhoff},
      {"bodies", suite_bodies},       {"projection", suite_projection},
      {"subdifferential", suite_subdifferential}, {"cli", suite_cli},
  };
  return r;
}

}  // namespace

io::Json VerifyReport::to_json() const {
  io::Json fails = io::Json::array();
  for (const auto& f : failures)
    fails.push_back(io::Json{{"invariant", f.invariant},
                             {"inputs", f.inputs},
                             {"observed", std::isfinite(f.observed) ? io::Json(f.observed) : io::Json(nullptr)},
                             {"expected", f.expected}});
  return io::Json{{"suite", suite}, {"cases_run", cases_run}, {"failures", fails}, {"wall_time", wall_time}};
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : registry()) v.push_back(name);
    return v;
  }();
  return names;
}

VerifyReport run_suite(const std::string& suite, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  VerifyReport report;
  report.suite = suite;
  Recorder rec(report);
  bool found = false;
  for (const auto& [name, fn] : registry()) {
    if (suite == "all" || suite == name) {
      fn(rec, seed);
      found = true;
    }
  }
  if (!found) throw DomainError("unknown verify suite '" + suite + "'");
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace minkowski
