#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "minkowski/errors.hpp"
#include "minkowski/monotone.hpp"
#include "minkowski/random.hpp"
#include "minkowski/subdifferential.hpp"

using namespace minkowski;
using test::vec;

namespace {

MonotoneData data(std::vector<MonotonePair> pairs) { return MonotoneData{std::move(pairs), 0}; }

}  // namespace

TEST_SUITE("monotone") {
  TEST_CASE("two point examples") {
    const Norm E = Norm::euclidean(2);
    const MonotoneData ok = data({{vec({0, 0}), vec({0, 0})}, {vec({1, 0}), vec({1, 0})}});
    const MonotoneReport r = cyclic_monotone_check(ok, E);
    CHECK(r.ok);
    CHECK(r.slack == doctest::Approx(-1.0));

    const MonotoneData bad = data({{vec({0, 0}), vec({1, 0})}, {vec({1, 0}), vec({-1, 0})}});
    const MonotoneReport b = cyclic_monotone_check(bad, E);
    CHECK_FALSE(b.ok);
    CHECK(b.slack == doctest::Approx(2.0));
    CHECK(cycle_weight(bad, E, b.worst_cycle) == doctest::Approx(2.0));
  }

  TEST_CASE("potential examples") {
    const Norm E = Norm::euclidean(2);
    const ConvexFunction zero = rockafellar_potential(data({{vec({0, 0}), vec({0, 0})}}), E);
    CHECK(zero(vec({3, -4})) == 0.0);

    const ConvexFunction f = rockafellar_potential(data({{vec({0, 0}), vec({0, 0})}, {vec({1, 0}), vec({1, 0})}}), E);
    for (const Vector& x : {vec({0, 0}), vec({2, 5}), vec({-1, 1}), vec({1.5, 0})})
      CHECK(f(x) == doctest::Approx(std::max(0.0, x(0) - 1.0)));
    CHECK(subgradient_member(f, vec({0, 0}), vec({0, 0}), E).verdict == Verdict::member);
    CHECK(subgradient_member(f, vec({1, 0}), vec({1, 0}), E).verdict == Verdict::member);
  }

  TEST_CASE("gradient pairs of half the squared norm") {
    const Norm E = Norm::euclidean(2);
    const MonotoneData S = data({{vec({0, 0}), vec({0, 0})}, {vec({1, 0}), vec({1, 0})}, {vec({0, 1}), vec({0, 1})}});
    const ConvexFunction f = rockafellar_potential(S, E);
    for (const auto& pr : S.pairs) {
      CHECK(f(pr.x) <= 0.5 * pr.x.squaredNorm() + 1e-12);
      CHECK(subgradient_member(f, pr.x, pr.w, E).verdict == Verdict::member);
    }
  }

  TEST_CASE("check agrees with exhaustive cycle enumeration") {
    CounterRng rng(31);
    const Norm N = Norm::p_norm(1.5, 2);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<MonotonePair> pairs;
      for (int i = 0; i < 4; ++i) pairs.push_back({rng.normal_vector(2), rng.normal_vector(2)});
      const MonotoneData S = data(pairs);
      double heaviest = -std::numeric_limits<double>::infinity();
      // Every cycle is a rotation of a sequence starting at its smallest index.
      for (int mask = 1; mask < 16; ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < 4; ++i)
          if (mask & (1 << i)) idx.push_back(i);
        if (idx.size() < 2) continue;
        do heaviest = std::max(heaviest, cycle_weight(S, N, idx));
        while (std::next_permutation(idx.begin() + 1, idx.end()));
      }
      const MonotoneReport r = cyclic_monotone_check(S, N);
      CHECK(r.ok == (heaviest <= 1e-9));
      if (!r.ok) CHECK(cycle_weight(S, N, r.worst_cycle) > 0.0);
    }
  }

  TEST_CASE("non monotone data throws with a positive cycle") {
    const MonotoneData bad = data({{vec({0, 0}), vec({1, 0})}, {vec({1, 0}), vec({-1, 0})}});
    try {
      (void)rockafellar_potential(bad, Norm::euclidean(2));
      FAIL("expected MonotonicityError");
    } catch (const MonotonicityError& e) {
      CHECK(e.weight() > 0.0);
      CHECK(cycle_weight(bad, Norm::euclidean(2), e.cycle()) == doctest::Approx(e.weight()));
    }
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(data({}).validate(), DomainError);
    CHECK_THROWS_AS(data({{vec({0, 0}), vec({0, 0, 0})}}).validate(), DimensionError);
    MonotoneData S = data({{vec({0, 0}), vec({0, 0})}});
    S.base_index = 3;
    CHECK_THROWS_AS(S.validate(), DomainError);
  }
}
