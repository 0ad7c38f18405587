// Acceptance run: one PASS/FAIL line per criterion. Each check compares the
// library against an oracle that does not share its code path (finite
// differences, brute-force grids, golden-section line searches, exhaustive
// or hand-built cycles).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "minkowski/birkhoff.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/legendre.hpp"
#include "minkowski/line_search.hpp"
#include "minkowski/monotone.hpp"
#include "minkowski/projection.hpp"
#include "minkowski/random.hpp"
#include "minkowski/subdifferential.hpp"
#include "minkowski/testbed.hpp"

using namespace minkowski;

namespace {

struct Criterion {
  int id = 0;
  std::string title;
  long cases = 0;
  long failures = 0;
  long skipped = 0;
  double worst = 0.0;
  std::string worst_note;
  std::string first_failure;

  // Records `observed` against `limit` (pass iff observed <= limit).
  void check(double observed, double limit, const std::string& where) {
    ++cases;
    if (observed > worst || (std::isnan(observed) && !std::isnan(worst))) {
      worst = observed;
      worst_note = where;
    }
    if (!(observed <= limit)) {
      if (failures == 0) first_failure = where + " observed " + std::to_string(observed);
      ++failures;
    }
  }
  void expect(bool ok, const std::string& where) { check(ok ? 0.0 : 1.0, 0.5, where); }
};

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

double rel_inf(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / (1.0 + std::max(a.lpNorm<Eigen::Infinity>(), b.lpNorm<Eigen::Infinity>()));
}

std::string tag(const std::string& norm, int n, const std::string& extra = "") {
  return norm + "/n=" + std::to_string(n) + (extra.empty() ? "" : "/" + extra);
}

// Central difference of a scalar function along v.
double central(const std::function<double(const Vector&)>& f, const Vector& x, const Vector& v, double h) {
  return (f(Vector(x + h * v)) - f(Vector(x - h * v))) / (2.0 * h);
}

// ---------------------------------------------------------------------------

void legendre_suite(Criterion& c) {
  CounterRng rng(101);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      for (int k = 0; k < 1000; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        const double s = rng.uniform(0.1, 10.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        const Functional L = legendre(N, x);
        const double rho = N(x);
        const std::string where = tag(nn.name, n);
        c.check(rel_inf(legendre(N, Vector(s * x)).coeffs(), s * L.coeffs()), 1e-6, where + " homogeneity");
        c.check(rel(dual_norm(N, L), rho), 1e-6, where + " norm preservation");
        c.check(rel(L(x), rho * rho), 1e-6, where + " L(x)x = |x|^2");
        c.check(rel_inf(legendre_inverse(N, L), x), 1e-6, where + " round trip");
        // Independent oracle for the map itself: L(x)v = 1/2 d/dt rho(x + tv)^2.
        const Vector v = rng.normal_vector(n);
        // rho^2 is only C^1 across coordinate hyperplanes when p < 2, so the
        // step stays well below the smallest coordinate.
        const double h = std::max(1e-10 * (1.0 + x.lpNorm<Eigen::Infinity>()),
                                  std::min(1e-5 * (1.0 + x.lpNorm<Eigen::Infinity>()), 1e-2 * x.cwiseAbs().minCoeff()));
        const double fd = central([&](const Vector& y) { return 0.5 * std::pow(N(y), 2); }, x, v, h);
        c.check(std::abs(L(v) - fd) / (1.0 + std::abs(fd) + rho * v.norm()), 1e-6, where + " finite differences");
      }
    }
  }
}

void self_duality_suite(Criterion& c) {
  CounterRng rng(202);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      for (int k = 0; k < 200; ++k) {
        const Functional phi(testbed::random_vector(n, rng));
        const Bidual lhs = legendre_of_dual(N, phi);
        const Vector rhs = legendre_inverse(N, phi);
        c.check(rel_inf(lhs.coords(), canonical_embed(rhs).coords()), 1e-5, tag(nn.name, n, "L* = J L^-1"));
        // Oracle: L*(phi) is the gradient of 1/2 |phi|_*^2, by central differences.
        Eigen::VectorXd fd(n);
        const double h = 1e-5 * (1.0 + phi.coeffs().lpNorm<Eigen::Infinity>());
        for (int i = 0; i < n; ++i) {
          const Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
          fd(i) = (std::pow(dual_norm(N, Functional(phi.coeffs() + h * e)), 2) -
                   std::pow(dual_norm(N, Functional(phi.coeffs() - h * e)), 2)) /
                  (4.0 * h);
        }
        c.check(rel_inf(fd, rhs), 1e-5, tag(nn.name, n, "dual gradient"));
      }
    }
  }
}

void birkhoff_suite(Criterion& c) {
  CounterRng rng(303);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      for (int k = 0; k < 1000; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        Vector y = testbed::random_vector(n, rng);
        // A quarter of the pairs are exactly orthogonal, a quarter nearly so,
        // the rest are generic or mildly tilted.
        const int mode = k % 4;
        if (mode < 3) {
          const Functional L = legendre(N, x);
          y -= (L(y) / L(x)) * x;
          if (mode == 1) y += 1e-11 * y.norm() / x.norm() * x;
          if (mode == 2) y += rng.uniform(1e-4, 1e-1) * y.norm() / x.norm() * x;
        }
        if (y.norm() < 1e-8) continue;
        const OrthogonalityReport r = birkhoff_vv(N, x, y);
        if (r.residual > 1e-7 && r.residual < 1e-5) {
          ++c.skipped;
          continue;
        }
        // Variational oracle: x is orthogonal to y iff min_t |x + ty| = |x|.
        const double rho = N(x);
        const double span = 2.0 * rho / N(y);
        const LineMinimum m = golden_section([&](double t) { return N(Vector(x + t * y)); }, -span, span);
        const bool variational = rho - m.value <= 1e-14 * (1.0 + rho);
        c.expect(variational == r.holds, tag(nn.name, n, "residual " + std::to_string(r.residual)));
      }
    }
  }
}

// Exterior points of K in N: the projection must lie on the boundary.
void projection_suite(Criterion& c) {
  CounterRng rng(404);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      for (const auto& nb : testbed::bodies(n, nn.norm)) {
        const Norm& N = nn.norm;
        const ConvexBody& K = nb.body;
        std::vector<Vector> samples;
        for (int i = 0; i < 500; ++i) samples.push_back(testbed::sample_body(K, rng));
        for (int k = 0; k < 100; ++k) {
          const Vector x = testbed::exterior_point(K, rng);
          const ProjectionResult r = project(N, K, x);
          const std::string where = tag(nn.name, n, nb.name);
          c.check(r.gap, 1e-7, where + " gap");
          c.expect(K.contains(r.point), where + " feasibility");
          double best = std::numeric_limits<double>::infinity();
          for (const Vector& s : samples) best = std::min(best, N(Vector(x - s)));
          c.check(r.distance - best, 1e-6, where + " vs 500 samples");
        }
      }
    }
  }
  // 2D polytopes against a brute-force grid of resolution 1e-3: the full
  // square grid for a few points, the boundary at the same resolution for
  // the rest.
  for (const auto& nn : testbed::builtin_norms(2)) {
    for (const auto& nb : testbed::polytopes(2)) {
      const Norm& N = nn.norm;
      const ConvexBody& K = nb.body;
      const auto& P = std::get<body_kind::Polytope>(K.kind());
      double lo[2], hi[2];
      for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(2, i);
        hi[i] = K.support(Functional(e));
        lo[i] = -K.support(Functional(-e));
      }
      for (int k = 0; k < 20; ++k) {
        const Vector x = testbed::exterior_point(K, rng);
        const double d = distance(N, K, x);
        double best = std::numeric_limits<double>::infinity();
        if (k < 2) {
          Vector g(2);
          const int na = static_cast<int>(std::ceil((hi[0] - lo[0]) / 1e-3));
          const int nb_ = static_cast<int>(std::ceil((hi[1] - lo[1]) / 1e-3));
          for (int ia = 0; ia <= na; ++ia) {
            for (int ib = 0; ib <= nb_; ++ib) {
              g << lo[0] + (hi[0] - lo[0]) * ia / na, lo[1] + (hi[1] - lo[1]) * ib / nb_;
              if ((P.facet_normals * g - P.facet_offsets).maxCoeff() <= 0.0) best = std::min(best, N(Vector(x - g)));
            }
          }
        } else {
          for (std::size_t f = 0; f < P.facet_vertices.size(); ++f) {
            const Vector& a = P.vertices[static_cast<std::size_t>(P.facet_vertices[f][0])];
            const Vector& b = P.vertices[static_cast<std::size_t>(P.facet_vertices[f][1])];
            const int steps = static_cast<int>(std::ceil((b - a).norm() / 1e-3));
            for (int s = 0; s <= steps; ++s) best = std::min(best, N(Vector(x - (a + (b - a) * (double(s) / steps)))));
          }
        }
        const std::string where = tag(nn.name, 2, nb.name + (k < 2 ? " full grid" : " boundary grid"));
        c.check(std::abs(d - best), 2e-3, where);
        c.check(d - best, 1e-9, where + " not above grid");
      }
    }
  }
}

void gradient_suite(Criterion& c) {
  CounterRng rng(505);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      for (const auto& nb : testbed::bodies(n, nn.norm)) {
        const Norm& N = nn.norm;
        const ConvexBody& K = nb.body;
        for (int k = 0; k < 100; ++k) {
          const Vector x = testbed::exterior_point(K, rng);
          const ProjectionResult r = project(N, K, x);
          const Functional L = legendre(N, *r.outer_normal);
          // Neither a p < 2 norm nor the boundary of a parallel body is C^2,
          // so the step is small and also kept below the smallest nonzero
          // coordinate of x - p; the distance is accurate enough for the
          // rounding to stay far below the tolerance.
          double h = 1e-6 * (1.0 + x.lpNorm<Eigen::Infinity>());
          for (const double w : (x - r.point).cwiseAbs())
            if (w > 0.0) h = std::min(h, 1e-2 * w);
          h = std::max(h, 1e-9 * (1.0 + x.lpNorm<Eigen::Infinity>()));
          double dev = 0.0;
          for (int i = 0; i < n; ++i) {
            const Vector e = Eigen::VectorXd::Unit(n, i);
            const double fd = central([&](const Vector& y) { return distance(N, K, y); }, x, e, h);
            dev = std::max(dev, std::abs(fd - L(e)));
          }
          c.check(dev, 1e-4, tag(nn.name, n, nb.name));
        }
      }
    }
  }
}

void sun_suite(Criterion& c) {
  CounterRng rng(606);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      for (const auto& nb : testbed::bodies(n, nn.norm)) {
        const Norm& N = nn.norm;
        const ConvexBody& K = nb.body;
        for (int k = 0; k < 100; ++k) {
          const Vector x = testbed::exterior_point(K, rng);
          const ProjectionResult r = project(N, K, x);
          for (double t : {0.5, 2.0, 10.0}) {
            const Vector q = project(N, K, Vector(r.point + t * *r.outer_normal)).point;
            c.check(N(Vector(q - r.point)), 1e-6, tag(nn.name, n, nb.name + " t=" + std::to_string(t)));
          }
        }
      }
    }
  }
}

void contraction_suite(Criterion& c) {
  CounterRng rng(707);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const auto bodies = testbed::bodies(n, nn.norm);
      // 1000 pairs and triples per norm, spread over the bodies.
      for (int k = 0; k < 1000; ++k) {
        const auto& nb = bodies[static_cast<std::size_t>(k) % bodies.size()];
        const Norm& N = nn.norm;
        const ConvexBody& K = nb.body;
        const Vector x = testbed::exterior_point(K, rng, 0.0, 2.5);
        const Vector y = testbed::exterior_point(K, rng, 0.0, 2.5);
        const double lam = rng.uniform();
        const double dx = distance(N, K, x);
        const double dy = distance(N, K, y);
        const std::string where = tag(nn.name, n, nb.name);
        c.check(std::abs(dx - dy) - N(Vector(x - y)), 1e-7, where + " contraction");
        c.check(distance(N, K, Vector(lam * x + (1 - lam) * y)) - (lam * dx + (1 - lam) * dy), 1e-7,
                where + " convexity");
      }
    }
  }
}

// f'+(x, u) for a max-affine function, computed from the pieces directly.
double max_affine_derivative(const function_kind::MaxAffine& f, const Vector& x, const Vector& u) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& p : f.pieces) top = std::max(top, p.phi(x) + p.b);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : f.pieces)
    if (p.phi(x) + p.b >= top - 1e-9 * (1.0 + std::abs(top))) best = std::max(best, p.phi(u));
  return best;
}

struct CertifiedSubgradient {
  ConvexFunction f;
  Vector x;
  Vector v;
  Norm norm;
  std::string where;
};

void max_formula_suite(Criterion& c, std::vector<CertifiedSubgradient>& certified) {
  CounterRng rng(808);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      for (int k = 0; k < 20; ++k) {
        const int pieces = rng.uniform_int(2, 8);
        const int active = rng.uniform_int(1, std::min(pieces, n + 1));
        const Vector x = rng.normal_vector(n);
        const ConvexFunction f = testbed::random_max_affine(n, pieces, active, x, rng);
        const auto& ma = std::get<function_kind::MaxAffine>(f.kind());
        const Vector u = rng.unit_vector(n);
        const std::string where = tag(nn.name, n, std::to_string(pieces) + " pieces, " + std::to_string(active) + " active");
        Vector w;
        try {
          w = subgradient_construct(f, x, u, N);
        } catch (const Error& e) {
          c.check(std::numeric_limits<double>::infinity(), 0.0, where + " construct threw: " + e.what());
          continue;
        }
        c.check(std::abs(legendre(N, w)(u) - max_affine_derivative(ma, x, u)), 1e-8, where + " L(w)u = f'+(x,u)");
        const SubgradientCertificate cert = subgradient_member(f, x, w, N);
        c.expect(cert.verdict == Verdict::member, where + " membership");
        // Oracle for membership: f'+(x, z) >= L(w)z on many random z.
        double worst = 0.0;
        const Functional Lw = legendre(N, w);
        for (int j = 0; j < 500; ++j) {
          const Vector z = rng.unit_vector(n);
          worst = std::max(worst, Lw(z) - max_affine_derivative(ma, x, z));
        }
        c.check(worst, 1e-8, where + " sampled membership");
        if (cert.verdict == Verdict::member) certified.push_back({f, x, w, N, where});

        // A nearby point where only one piece is active.
        const Vector y = x + 1e-2 * rng.unit_vector(n);
        if (!is_differentiable_at(f, y)) continue;
        const Vector grad = norm_gradient(f, y, N);
        const Vector wy = subgradient_construct(f, y, rng.unit_vector(n), N);
        c.check(rel_inf(wy, grad), 1e-6, where + " differentiable point");
      }
    }
  }
}

// Probes split between the normal cone and its complement, with norms on
// both sides of 1 since the sub-differential is the cone cut by the unit ball.
void normal_cone_suite(Criterion& c) {
  CounterRng rng(909);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      for (const auto& nb : testbed::polytopes(n)) {
        const ConvexBody& K = nb.body;
        const auto& P = std::get<body_kind::Polytope>(K.kind());
        std::vector<std::pair<Vector, std::string>> points;
        for (std::size_t i = 0; i < P.vertices.size(); ++i) points.emplace_back(P.vertices[i], "vertex " + std::to_string(i));
        for (std::size_t f = 0; f < P.facet_vertices.size(); ++f) {
          Vector mid = Vector::Zero(n);
          for (int i : P.facet_vertices[f]) mid += P.vertices[static_cast<std::size_t>(i)];
          points.emplace_back(mid / static_cast<double>(P.facet_vertices[f].size()), "facet " + std::to_string(f));
        }
        const ConvexFunction d = ConvexFunction::distance_to(K, N);
        for (const auto& [z, label] : points) {
          const NormalCone cone = normal_cone(K, z, N);
          const SubgradientTester tester(d, z, N, 64, 5);
          for (int k = 0; k < 200; ++k) {
            // Even probes are built inside the cone; odd ones are generic.
            const bool in_cone = k % 2 == 0;
            Vector v;
            if (in_cone) {
              v = Vector::Zero(n);
              for (const Vector& g : cone.generators()) v += rng.uniform() * g;
            } else {
              v = rng.normal_vector(n);
            }
            if (N(v) < 1e-12) continue;
            v *= rng.uniform(0.05, 1.5) / N(v);
            // Members of the cone sit at slack 0, so the band only concerns
            // generic probes that come close to the cone from outside.
            const double cone_slack = cone.membership_slack(v);
            if (std::abs(N(v) - 1.0) < 1e-6 || (!in_cone && cone_slack > 0.0 && cone_slack < 1e-6)) {
              ++c.skipped;
              continue;
            }
            const std::string where = tag(nn.name, n, nb.name + " " + label);
            if (in_cone) c.expect(cone.contains(v), where + " constructed member");
            const bool expected = cone.contains(v) && N(v) <= 1.0;
            c.expect((tester.test(v).verdict == Verdict::member) == expected, where);
          }
        }
      }
    }
  }
}

// A smooth convex function: log-sum-exp of affine maps plus a quadratic.
struct SmoothConvex {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::VectorXd grad(const Vector& x) const {
    const Eigen::VectorXd z = A * x + b;
    const Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
    return A.transpose() * (e / e.sum()) + 0.5 * x;
  }
};

// Weight of a cycle computed from the definition, without chain_weight.
double hand_cycle_weight(const MonotoneData& S, const Norm& N, const std::vector<int>& cyc) {
  double total = 0.0;
  for (std::size_t k = 0; k < cyc.size(); ++k) {
    const auto& a = S.pairs[static_cast<std::size_t>(cyc[k])];
    const auto& b = S.pairs[static_cast<std::size_t>(cyc[(k + 1) % cyc.size()])];
    total += legendre(N, a.w)(Vector(b.x - a.x));
  }
  return total;
}

void rockafellar_suite(Criterion& c) {
  CounterRng rng(1010);
  int made = 0;
  for (int trial = 0; made < 50; ++trial) {
    const int n = testbed::kDimensions[trial % 3];
    const auto norms = testbed::builtin_norms(n);
    const auto& nn = norms[static_cast<std::size_t>(trial) % norms.size()];
    const Norm& N = nn.norm;
    const int m = rng.uniform_int(2, 12);
    SmoothConvex g{Eigen::MatrixXd(4, n), Eigen::VectorXd(4)};
    for (int i = 0; i < 4; ++i) {
      g.A.row(i) = rng.normal_vector(n).transpose();
      g.b(i) = rng.normal();
    }
    MonotoneData S;
    for (int i = 0; i < m; ++i) {
      const Vector x = rng.normal_vector(n);
      S.pairs.push_back({x, legendre_inverse(N, Functional(g.grad(x)))});
    }
    S.base_index = rng.uniform_int(0, m - 1);
    ++made;
    const std::string where = tag(nn.name, n, "|S|=" + std::to_string(m));
    try {
      const ConvexFunction f = rockafellar_potential(S, N);
      c.check(std::abs(f(S.pairs[static_cast<std::size_t>(S.base_index)].x)), 1e-9, where + " f(x_base)");
      for (const auto& pr : S.pairs) {
        const SubgradientCertificate cert = subgradient_member(f, pr.x, pr.w, N);
        c.expect(cert.verdict == Verdict::member && cert.exact.value_or(false), where + " S in df");
      }
    } catch (const Error& e) {
      c.check(std::numeric_limits<double>::infinity(), 0.0, where + " monotone set rejected: " + e.what());
    }

    // Perturb: tilt w_i so that the two-cycle (i, j) has positive weight.
    MonotoneData bad = S;
    const int i = rng.uniform_int(0, m - 1);
    int j = rng.uniform_int(0, m - 2);
    if (j >= i) ++j;
    auto& pi = bad.pairs[static_cast<std::size_t>(i)];
    const auto& pj = bad.pairs[static_cast<std::size_t>(j)];
    const Vector step = pj.x - pi.x;
    const double two_cycle = legendre(N, pi.w)(step) - legendre(N, pj.w)(step);
    const Eigen::VectorXd tilt = (std::max(0.0, -two_cycle) + 1.0) * step / step.squaredNorm();
    pi.w = legendre_inverse(N, Functional(legendre(N, pi.w).coeffs() + tilt));
    c.check(-hand_cycle_weight(bad, N, {i, j}), -1e-3, where + " perturbation built");
    const MonotoneReport r = cyclic_monotone_check(bad, N);
    c.expect(!r.ok, where + " perturbed set accepted");
    if (!r.ok) c.check(-hand_cycle_weight(bad, N, r.worst_cycle), 0.0, where + " exhibited cycle weight");
    try {
      (void)rockafellar_potential(bad, N);
      c.expect(false, where + " potential built for a non-monotone set");
    } catch (const MonotonicityError& e) {
      c.check(-hand_cycle_weight(bad, N, e.cycle()), 0.0, where + " thrown cycle weight");
    }
  }
}

void regularity_suite(Criterion& c, std::vector<CertifiedSubgradient>& certified) {
  CounterRng rng(1111);
  for (int n : testbed::kDimensions) {
    for (const auto& nn : testbed::builtin_norms(n)) {
      const Norm& N = nn.norm;
      const ConvexFunction rho = ConvexFunction::norm_function(N);
      for (int k = 0; k < 500; ++k) {
        const Vector x = testbed::random_vector(n, rng);
        const Vector g = norm_gradient(rho, x, N);
        c.check(rel_inf(g, x / N(x)), 1e-6, tag(nn.name, n));
        if (k < 10) certified.push_back({rho, x, g, N, tag(nn.name, n, "rho")});
      }
    }
  }
}

void estimate_suite(Criterion& c, std::vector<CertifiedSubgradient>& certified) {
  // Distance functions at exterior points add a third family.
  CounterRng rng(1212);
  for (const auto& nn : testbed::builtin_norms(2)) {
    for (const auto& nb : testbed::bodies(2, nn.norm)) {
      const ConvexFunction d = ConvexFunction::distance_to(nb.body, nn.norm);
      for (int k = 0; k < 3; ++k) {
        const Vector x = testbed::exterior_point(nb.body, rng);
        certified.push_back({d, x, distance_gradient(nn.norm, nb.body, x), nn.norm, tag(nn.name, 2, nb.name)});
      }
    }
  }
  std::uint64_t seed = 0;
  for (const auto& s : certified) {
    const EstimateReport r = estimate_check(s.f, s.x, s.v, s.norm, 64, ++seed);
    c.check(-r.slack, 1e-6, s.where);
  }
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Criterion> all;
  std::vector<CertifiedSubgradient> certified;
  auto run = [&](int id, const std::string& title, const std::function<void(Criterion&)>& body) {
    Criterion c;
    c.id = id;
    c.title = title;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body(c);
    } catch (const std::exception& e) {
      ++c.failures;
      c.first_failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s  (cases %ld, failures %ld, skipped %ld, worst %.3g, %.2fs)\n", c.id,
                c.failures == 0 ? "PASS" : "FAIL", c.title.c_str(), c.cases, c.failures, c.skipped, c.worst, secs);
    if (c.failures > 0) std::printf("              first failure: %s\n", c.first_failure.c_str());
    std::fflush(stdout);
    all.push_back(c);
  };

  run(1, "Legendre map: homogeneity, norm preservation, L(x)x, round trip", legendre_suite);
  run(2, "Self-duality L* = J L^-1", self_duality_suite);
  run(3, "Birkhoff algebraic test vs line search", birkhoff_suite);
  run(4, "Projection optimality: gap, body samples, 2D grid", projection_suite);
  run(5, "grad d_K = eta_K by finite differences", gradient_suite);
  run(6, "Sun property", sun_suite);
  run(7, "Weak contraction and convexity of d_K", contraction_suite);
  run(8, "Max formula for max-affine functions", [&](Criterion& c) { max_formula_suite(c, certified); });
  run(9, "Boundary sub-differential of d_K = normal cone", normal_cone_suite);
  run(10, "Rockafellar potential and rejection", rockafellar_suite);
  run(11, "Norm regularity grad rho = x / rho(x)", [&](Criterion& c) { regularity_suite(c, certified); });
  run(12, "Estimate chain on certified sub-gradients", [&](Criterion& c) { estimate_suite(c, certified); });

  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const long failed = std::count_if(all.begin(), all.end(), [](const Criterion& c) { return c.failures > 0; });
  std::printf("acceptance: %ld of %zu criteria passed in %.1fs\n", static_cast<long>(all.size()) - failed, all.size(), total);
  return failed == 0 ? 0 : 1;
}
