#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/random.hpp"
#include "minkowski/testbed.hpp"

using namespace minkowski;
using test::vec;

TEST_SUITE("norms") {
  TEST_CASE("evaluation examples") {
    CHECK(norm_eval(Norm::euclidean(2), vec({3, 4})) == doctest::Approx(5.0));
    CHECK(norm_eval(test::p4(), vec({1, 1})) == doctest::Approx(1.18920712).epsilon(1e-8));
    for (const auto& nn : testbed::builtin_norms(3)) CHECK(norm_eval(nn.norm, Vector::Zero(3)) == 0.0);
    const Norm E = Norm::ellipsoidal((Eigen::MatrixXd(2, 2) << 1, 0, 0, 4).finished());
    CHECK(E(vec({0, 1})) == doctest::Approx(2.0));
  }

  TEST_CASE("differential examples") {
    const Functional g = norm_grad(Norm::euclidean(2), vec({3, 4}));
    CHECK(test::max_abs_diff(g.coeffs(), vec({0.6, 0.8})) < 1e-14);
    const Functional h = norm_grad(test::p4(), vec({1, 1}));
    CHECK(h.coeffs()(0) == doctest::Approx(0.59460355).epsilon(1e-8));
    CHECK(h.coeffs()(1) == doctest::Approx(0.59460355).epsilon(1e-8));
    CHECK(h(vec({1, 1})) == doctest::Approx(std::pow(2.0, 0.25)));
    CHECK_THROWS_AS(norm_grad(test::p4(), vec({0, 0})), SingularPointError);
  }

  TEST_CASE("analytic differential matches finite differences") {
    CounterRng rng(11);
    for (int n : testbed::kDimensions) {
      for (const auto& nn : testbed::builtin_norms(n)) {
        for (int k = 0; k < 20; ++k) {
          const Vector x = testbed::random_vector(n, rng);
          const Eigen::VectorXd fd = central_difference_gradient(
              [&](const Vector& y) { return nn.norm(y); }, x, 1e-4 * (1.0 + x.lpNorm<Eigen::Infinity>()));
          CHECK(test::max_abs_diff(norm_grad(nn.norm, x).coeffs(), fd) < 1e-7);
        }
      }
    }
  }

  TEST_CASE("norm axioms hold on random samples") {
    CounterRng rng(5);
    for (const auto& nn : testbed::builtin_norms(3)) {
      for (int k = 0; k < 200; ++k) {
        const Vector x = testbed::random_vector(3, rng);
        const Vector y = testbed::random_vector(3, rng);
        const double s = rng.uniform(-5.0, 5.0);
        CHECK(nn.norm(x) > 0.0);
        CHECK(nn.norm(Vector(s * x)) == doctest::Approx(std::abs(s) * nn.norm(x)).epsilon(1e-12));
        CHECK(nn.norm(Vector(x + y)) <= nn.norm(x) + nn.norm(y) + 1e-12);
      }
    }
  }

  TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(Norm::p_norm(1.0, 2), DomainError);
    CHECK_THROWS_AS(Norm::p_norm(std::numeric_limits<double>::infinity(), 2), DomainError);
    CHECK_THROWS_AS(Norm::weighted_p(3.0, vec({1, -1})), DomainError);
    CHECK_THROWS_AS(Norm::ellipsoidal((Eigen::MatrixXd(2, 2) << 1, 2, 2, 1).finished()), DomainError);
    CHECK_THROWS_AS(test::p4()(vec({1, 2, 3})), DimensionError);
  }

  TEST_CASE("custom norms are probed for the axioms") {
    const Norm good = Norm::custom(2, [](const Vector& x) { return std::pow(std::pow(std::abs(x(0)), 3) + std::pow(std::abs(x(1)), 3), 1.0 / 3.0); });
    CHECK(good(vec({1, 0})) == doctest::Approx(1.0));
    CHECK(norm_grad(good, vec({1, 1})).coeffs()(0) == doctest::Approx(std::pow(2.0, -2.0 / 3.0)).epsilon(1e-6));
    // Not homogeneous.
    CHECK_THROWS_AS(Norm::custom(2, [](const Vector& x) { return x.squaredNorm(); }), DomainError);
    // The max norm is not strictly convex.
    CHECK_THROWS_AS(Norm::custom(2, [](const Vector& x) { return x.lpNorm<Eigen::Infinity>(); }), DomainError);
  }

  TEST_CASE("sphere samples lie on the unit sphere") {
    const auto s = sphere_sample(Norm::euclidean(2), 4, 0);
    CHECK(s.points.size() == 4);
    for (const Vector& p : s.points) CHECK(std::abs(Norm::euclidean(2)(p) - 1.0) <= 1e-8);
    for (const Vector& p : sphere_sample(test::p4(), 100, 3).points) CHECK(std::abs(test::p4()(p) - 1.0) <= 1e-8);
    CHECK(sphere_sample(test::p4(), 1, 0).points.size() == 1);
    const auto a = sphere_sample(test::p4(3), 16, 9);
    const auto b = sphere_sample(test::p4(3), 16, 9);
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
  }

  TEST_CASE("differential is continuous away from the origin") {
    const Norm N = Norm::p_norm(1.5, 2);
    const Vector x = vec({0.7, -0.2});
    const Vector e = vec({0.6, 0.8});
    double prev = std::numeric_limits<double>::infinity();
    for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) {
      const double diff = test::max_abs_diff(norm_grad(N, Vector(x + d * e)).coeffs(), norm_grad(N, x).coeffs());
      CHECK(diff < prev);
      prev = diff;
    }
    CHECK(prev < 1e-4);
  }
}
