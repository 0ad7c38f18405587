#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/legendre.hpp"
#include "minkowski/projection.hpp"
#include "minkowski/random.hpp"
#include "minkowski/testbed.hpp"

using namespace minkowski;
using test::vec;

namespace {

ConvexBody square() { return make_polytope({vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})}); }

}  // namespace

TEST_SUITE("projection") {
  TEST_CASE("projection examples") {
    const ProjectionResult ball = project(Norm::euclidean(2), make_ball(vec({0, 0}), 1.0, Norm::euclidean(2)), vec({2, 0}));
    CHECK(test::max_abs_diff(ball.point, vec({1, 0})) < 1e-12);
    CHECK(ball.distance == doctest::Approx(1.0));

    const ProjectionResult sq = project(test::p4(), square(), vec({3, 0}));
    CHECK(test::max_abs_diff(sq.point, vec({1, 0})) < 1e-9);
    CHECK(sq.distance == doctest::Approx(2.0));
    CHECK(sq.certified);
    CHECK(sq.gap <= 1e-7);

    const ProjectionResult in = project(test::p4(), square(), vec({0.2, -0.3}));
    CHECK(in.point == vec({0.2, -0.3}));
    CHECK(in.distance == 0.0);
    CHECK_FALSE(in.outer_normal.has_value());
  }

  TEST_CASE("distance examples") {
    CHECK(distance(Norm::euclidean(2), square(), vec({0, 3})) == doctest::Approx(2.0));
    CHECK(distance(Norm::euclidean(2), square(), vec({2, 2})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance(Norm::euclidean(2), square(), vec({0.9, 0})) == 0.0);
  }

  TEST_CASE("p = 4 projection onto an edge is not pulled to a vertex") {
    // On the top edge rho(x - (s, 1)) is minimized exactly at s = x_1.
    const Vector x = vec({-0.99575808565925517, 2.6219788644395803});
    const ProjectionResult r = project(test::p4(), square(), x);
    CHECK(test::max_abs_diff(r.point, vec({x(0), 1.0})) < 1e-12);
  }

  TEST_CASE("distance gradient examples") {
    CHECK(test::max_abs_diff(distance_gradient(test::p4(), square(), vec({3, 0})), vec({1, 0})) < 1e-9);
    const ConvexBody B = make_ball(vec({0, 0}), 1.0, Norm::euclidean(2));
    CHECK(test::max_abs_diff(distance_gradient(Norm::euclidean(2), B, vec({0, 2})), vec({0, 1})) < 1e-12);
    CHECK(distance_gradient(test::p4(), square(), vec({0.1, 0.1})).isZero(0.0));
    CHECK_THROWS_AS(distance_gradient(test::p4(), square(), vec({1, 0})), NonDifferentiableError);
  }

  TEST_CASE("residual is orthogonal to the body at the projection") {
    CounterRng rng(21);
    for (int n : testbed::kDimensions) {
      for (const auto& nn : testbed::builtin_norms(n)) {
        for (const auto& nb : testbed::bodies(n, nn.norm)) {
          for (int k = 0; k < 5; ++k) {
            const Vector x = testbed::exterior_point(nb.body, rng);
            const ProjectionResult r = project(nn.norm, nb.body, x);
            REQUIRE(r.outer_normal.has_value());
            const Functional phi = legendre(nn.norm, *r.outer_normal);
            // L(eta) attains its maximum over K at p_K(x).
            CHECK(nb.body.support(phi) - phi(r.point) <= 1e-6);
            CHECK(nb.body.contains(r.point));
          }
        }
      }
    }
  }

  TEST_CASE("sun property examples") {
    CHECK(sun_check(Norm::euclidean(2), square(), vec({3, 0}), 5.0));
    for (double t : {0.5, 2.0, 10.0}) CHECK(sun_check(test::p4(), square(), vec({3, 0}), t));
    CHECK_THROWS_AS(sun_check(test::p4(), square(), vec({0, 0}), 1.0), DomainError);
  }

  TEST_CASE("parallel body normal examples") {
    CHECK(parallel_normal_check(Norm::euclidean(2), square(), vec({1, 0}), vec({1, 0}), 1.0));
    const NormalCone cone = normal_cone(square(), vec({1, 1}), test::p4());
    for (const Vector& g : cone.generators()) CHECK(parallel_normal_check(test::p4(), square(), vec({1, 1}), g, 0.5));
    CHECK_THROWS_AS(parallel_normal_check(Norm::euclidean(2), square(), vec({1, 0}), vec({0, 1}), 1.0), DomainError);
  }

  TEST_CASE("distance is 1-Lipschitz and convex") {
    CounterRng rng(4);
    const Norm N = Norm::p_norm(1.5, 3);
    for (const auto& nb : testbed::polytopes(3)) {
      for (int k = 0; k < 30; ++k) {
        const Vector x = testbed::exterior_point(nb.body, rng, 0.0, 2.0);
        const Vector y = testbed::exterior_point(nb.body, rng, 0.0, 2.0);
        const double lam = rng.uniform();
        const double dx = distance(N, nb.body, x);
        const double dy = distance(N, nb.body, y);
        CHECK(std::abs(dx - dy) <= N(Vector(x - y)) + 1e-7);
        CHECK(distance(N, nb.body, Vector(lam * x + (1 - lam) * y)) <= lam * dx + (1 - lam) * dy + 1e-7);
      }
    }
  }
}
