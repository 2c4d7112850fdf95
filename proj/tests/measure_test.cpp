#include <cmath>

#include <doctest.h>

#include "mmot/errors.hpp"
#include "mmot/measure.hpp"

using namespace mmot;

TEST_CASE("uniform box midpoint grid") {
  const auto mu = discretize_uniform_box({{0.0}, {0.5}}, 2);
  REQUIRE(mu.size() == 2);
  CHECK(mu.point(0)[0] == 0.125);
  CHECK(mu.point(1)[0] == 0.375);
  CHECK(mu.weight(0) == 0.5);
  CHECK(mu.weight(1) == 0.5);
}

TEST_CASE("uniform box single cell in 2d") {
  const auto mu = discretize_uniform_box({{0.0, 0.0}, {0.5, 0.5}}, 1);
  REQUIRE(mu.size() == 1);
  CHECK(mu.point(0) == Point{0.25, 0.25});
  CHECK(mu.weight(0) == 1.0);
}

TEST_CASE("uniform box shifted interval") {
  const auto mu = discretize_uniform_box({{3.0}, {3.5}}, 4);
  REQUIRE(mu.size() == 4);
  CHECK(mu.point(0)[0] == 3.0625);
  CHECK(mu.point(1)[0] == 3.1875);
  CHECK(mu.point(2)[0] == 3.3125);
  CHECK(mu.point(3)[0] == 3.4375);
}

TEST_CASE("degenerate box rejected") {
  CHECK_THROWS_AS(discretize_uniform_box({{0.0}, {0.0}}, 2), InvalidDomain);
  CHECK_THROWS_AS(discretize_uniform_box({{0.0}, {1.0}}, 0), InvalidDomain);
}

TEST_CASE("measure invariants") {
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0.0}}, {0.5}), InvalidInput);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0.0}, {1.0}}, {1.5, -0.5}), InvalidInput);
  CHECK_THROWS_AS(DiscreteMeasure(1, {{0.0, 1.0}}, {1.0}), InvalidInput);

  // Bitwise duplicates merge by weight addition.
  const DiscreteMeasure merged(1, {{0.0}, {1.0}, {0.0}}, {0.25, 0.5, 0.25});
  REQUIRE(merged.size() == 2);
  CHECK(merged.point(0)[0] == 0.0);
  CHECK(merged.weight(0) == 0.5);
}

TEST_CASE("counterexample parts n=1") {
  const auto parts = build_counterexample_parts(1, 1);
  REQUIRE(parts.mu_c.size() == 1);
  CHECK(parts.mu_c.point(0)[0] == 0.25);
  REQUIRE(parts.mu_r.size() == 2);
  CHECK(parts.mu_r.point(0)[0] == 3.25);
  CHECK(parts.mu_r.point(1)[0] == 9.25);
  CHECK(parts.mu_r.weight(0) == 0.5);
  REQUIRE(parts.mu_l.size() == 2);
  CHECK(parts.mu_l.point(0)[0] == -3.5);
  CHECK(parts.mu_l.point(1)[0] == -9.5);
}

TEST_CASE("counterexample parts n=2 left atoms") {
  const auto parts = build_counterexample_parts(1, 2);
  REQUIRE(parts.mu_l.size() == 4);
  for (double want : {-3.25, -3.75, -9.25, -9.75}) {
    CHECK(parts.mu_l.find_atom({want}) >= 0);
  }
  for (std::size_t i = 0; i < 4; ++i) CHECK(parts.mu_l.weight(i) == 0.25);
}

TEST_CASE("counterexample parts d=2") {
  const auto parts = build_counterexample_parts(2, 1);
  REQUIRE(parts.mu_c.size() == 1);
  CHECK(parts.mu_c.point(0) == Point{0.25, 0.25});
  CHECK(parts.mu_l.find_atom({-3.5, -3.5}) >= 0);
  CHECK(parts.mu_l.find_atom({-9.5, -9.5}) >= 0);
}

TEST_CASE("parts closed under the two-branch maps exactly") {
  for (int d : {1, 2}) {
    for (int n : {1, 2, 3, 4}) {
      const auto parts = build_counterexample_parts(d, n);
      for (const auto& x : parts.mu_c.points()) {
        for (int k = 1; k <= 2; ++k) {
          const double shift = std::pow(3.0, k);
          Point r(x), l(x);
          for (int a = 0; a < d; ++a) {
            r[a] = x[a] + shift;
            l[a] = -(x[a] + r[a]);
          }
          CHECK(parts.mu_r.find_atom(r) >= 0);
          CHECK(parts.mu_l.find_atom(l) >= 0);
        }
      }
    }
  }
}

TEST_CASE("part means cancel") {
  for (int n : {1, 2, 5}) {
    const auto parts = build_counterexample_parts(1, n);
    const double sum = moments(parts.mu_c).mean[0] + moments(parts.mu_r).mean[0] +
                       moments(parts.mu_l).mean[0];
    CHECK(std::abs(sum) <= 1e-12);
  }
}

TEST_CASE("moments of the parts") {
  const auto parts = build_counterexample_parts(1, 1);
  CHECK(moments(parts.mu_c).mean[0] == 0.25);
  CHECK(moments(parts.mu_r).mean[0] == 6.25);
  CHECK(moments(parts.mu_l).mean[0] == -6.5);
}

TEST_CASE("second moments approach the continuum values") {
  // Closed forms: 1/12, 48.0833..., 51.3333..., total 99.5.
  double prev = 0.0;
  for (int n : {1, 4, 16, 64}) {
    const auto parts = build_counterexample_parts(1, n);
    const double total = moments(parts.mu_c).second_moment +
                         moments(parts.mu_r).second_moment +
                         moments(parts.mu_l).second_moment;
    CHECK(total > prev);
    CHECK(total < 99.5);
    prev = total;
  }
  CHECK(std::abs(prev - 99.5) < 1e-3);
}

TEST_CASE("combined counterexample measure") {
  const auto mu1 = build_counterexample_measure(1, 1);
  REQUIRE(mu1.size() == 5);
  CHECK(mu1.weight(static_cast<std::size_t>(mu1.find_atom({0.25}))) == doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(mu1.weight(static_cast<std::size_t>(mu1.find_atom({3.25}))) == doctest::Approx(1.0 / 6).epsilon(1e-14));

  const auto mu2 = build_counterexample_measure(1, 2);
  CHECK(mu2.size() == 10);
  double total = 0.0;
  for (double w : mu2.weights()) total += w;
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("block layout classification") {
  const BlockLayout layout{1};
  using B = BlockLayout::Block;
  CHECK(layout.classify({0.25}) == B::C);
  CHECK(layout.classify({3.25}) == B::R1);
  CHECK(layout.classify({9.25}) == B::R2);
  CHECK(layout.classify({-3.5}) == B::L1);
  CHECK(layout.classify({-9.5}) == B::L2);
  CHECK(layout.classify({2.0}) == B::Outside);

  const BlockLayout plane{2};
  CHECK(plane.classify({0.25, 0.25}) == B::C);
  CHECK(plane.classify({0.25, 3.25}) == B::Outside);
}

TEST_CASE("negation symmetry probe") {
  const DiscreteMeasure sym(1, {{-1.0}, {1.0}}, {0.5, 0.5});
  CHECK(sym.symmetric_under_negation());
  const DiscreteMeasure asym(1, {{0.0}, {1.0}}, {0.5, 0.5});
  CHECK(!asym.symmetric_under_negation());
}
