#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/legendre.hpp"
#include "minkowski/random.hpp"
#include "minkowski/testbed.hpp"

using namespace minkowski;
using test::fun;
using test::vec;

TEST_SUITE("legendre") {
  TEST_CASE("forward map examples") {
    CHECK(test::max_abs_diff(legendre(Norm::euclidean(2), vec({3, 4})).coeffs(), vec({3, 4})) < 1e-14);
    const Functional l = legendre(test::p4(), vec({1, 1}));
    CHECK(test::max_abs_diff(l.coeffs(), vec({M_SQRT1_2, M_SQRT1_2})) < 1e-12);
    CHECK(legendre(test::p4(), vec({0, 0})).is_zero());
  }

  TEST_CASE("forward map is half the derivative of the squared norm") {
    const Norm N = Norm::p_norm(1.5, 3);
    const Vector x = vec({0.3, -1.2, 2.0});
    const Vector v = vec({1.0, 0.5, -0.25});
    const double h = 1e-5;
    const double fd = (std::pow(N(Vector(x + h * v)), 2) - std::pow(N(Vector(x - h * v)), 2)) / (4.0 * h);
    CHECK(legendre(N, x)(v) == doctest::Approx(fd).epsilon(1e-8));
  }

  TEST_CASE("dual norm examples") {
    CHECK(dual_norm(Norm::euclidean(2), fun({3, 4})) == doctest::Approx(5.0));
    CHECK(dual_norm(test::p4(), fun({1, 1})) == doctest::Approx(std::pow(2.0, 0.75)).epsilon(1e-10));
    CHECK(dual_norm(test::p4(), fun({0, 0})) == 0.0);
  }

  TEST_CASE("dual norm agrees with a dense sphere sample") {
    for (const auto& nn : testbed::builtin_norms(2)) {
      const Functional phi = fun({0.7, -1.9});
      double best = 0.0;
      for (const Vector& u : sphere_sample(nn.norm, 20000, 1).points) best = std::max(best, phi(u));
      const double exact = dual_norm(nn.norm, phi);
      CHECK(exact >= best - 1e-12);
      CHECK(exact <= best * (1.0 + 1e-5));
    }
  }

  TEST_CASE("inverse map examples") {
    CHECK(test::max_abs_diff(legendre_inverse(Norm::euclidean(2), fun({3, 4})), vec({3, 4})) < 1e-12);
    const Vector back = legendre_inverse(test::p4(), legendre(test::p4(), vec({1, 1})));
    CHECK(test::max_abs_diff(back, vec({1, 1})) < 1e-6);
    CHECK(legendre_inverse(test::p4(), fun({0, 0})).isZero(0.0));
  }

  TEST_CASE("dual maximizer attains the dual norm on the unit sphere") {
    for (const auto& nn : testbed::builtin_norms(3)) {
      const Functional phi = fun({1, -2, 0.5});
      const Vector u = dual_maximizer(nn.norm, phi);
      CHECK(nn.norm(u) == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(phi(u) == doctest::Approx(dual_norm(nn.norm, phi)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(dual_maximizer(test::p4(), fun({0, 0})), DomainError);
  }

  TEST_CASE("custom norms use sphere ascent for the dual") {
    const Norm C = Norm::custom(2, [](const Vector& x) { return std::pow(std::pow(std::abs(x(0)), 3) + std::pow(std::abs(x(1)), 3), 1.0 / 3.0); });
    const Norm B = Norm::p_norm(3.0, 2);
    const Functional phi = fun({0.4, 1.3});
    CHECK(dual_norm(C, phi) == doctest::Approx(dual_norm(B, phi)).epsilon(1e-6));
    CHECK(test::max_abs_diff(legendre_inverse(C, phi), legendre_inverse(B, phi)) < 1e-4);
    CHECK_FALSE(dual_of(C).has_value());
  }

  TEST_CASE("self duality on the built-in norms") {
    CounterRng rng(17);
    for (const auto& nn : testbed::builtin_norms(3)) {
      for (int k = 0; k < 25; ++k) {
        const Functional phi(testbed::random_vector(3, rng));
        const Bidual lhs = legendre_of_dual(nn.norm, phi);
        const Bidual rhs = canonical_embed(legendre_inverse(nn.norm, phi));
        CHECK(test::max_abs_diff(lhs.coords(), rhs.coords()) <= 1e-8 * (1.0 + rhs.coords().lpNorm<Eigen::Infinity>()));
      }
    }
  }

  TEST_CASE("legendre pair bundles both sides") {
    const LegendrePair pr = make_legendre_pair(test::p4(), vec({1, 1}));
    CHECK(pr.dual(pr.primal) == doctest::Approx(std::pow(test::p4()(pr.primal), 2)));
  }
}
