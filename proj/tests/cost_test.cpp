#include <cmath>
#include <cstdlib>
#include <random>

#include <doctest.h>

#include "mmot/cost.hpp"
#include "mmot/errors.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

TEST_CASE("harmonic cost values") {
  const std::vector<double> t{0.0, 3.0, -3.0};
  CHECK(eval_cost({CostKind::Repulsive, 3, 1}, t) == -54.0);
  CHECK(eval_cost({CostKind::Attractive, 3, 1}, t) == 54.0);
  CHECK(eval_cost({CostKind::SumSquare, 3, 1}, t) == 0.0);
}

TEST_CASE("shape mismatch rejected") {
  CHECK_THROWS_AS(eval_cost({CostKind::Repulsive, 3, 1}, std::vector<double>{0.0, 1.0}),
                  InvalidInput);
}

TEST_CASE("attractive is the sign flip of repulsive, both symmetric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> t(6);
    for (double& v : t) v = coord(rng);
    const CostSpec rep{CostKind::Repulsive, 3, 2};
    const CostSpec att{CostKind::Attractive, 3, 2};
    CHECK(eval_cost(att, t) == -eval_cost(rep, t));
    // Swap marginals 0 and 2.
    std::vector<double> s{t[4], t[5], t[2], t[3], t[0], t[1]};
    CHECK(eval_cost(rep, s) == doctest::Approx(eval_cost(rep, t)).epsilon(1e-12));
  }
}

TEST_CASE("two-marginal cost tensor") {
  const DiscreteMeasure mu(1, {{0.0}, {1.0}}, {0.5, 0.5});
  const auto tensor = cost_tensor({CostKind::Repulsive, 2, 1}, {mu, mu});
  REQUIRE(tensor.shape == std::vector<std::size_t>{2, 2});
  CHECK(tensor.values == std::vector<double>{0.0, -1.0, -1.0, 0.0});
}

TEST_CASE("single-atom tensor is the scalar cost") {
  const DiscreteMeasure a(1, {{0.25}}, {1.0});
  const DiscreteMeasure b(1, {{3.25}}, {1.0});
  const DiscreteMeasure c(1, {{-3.5}}, {1.0});
  const auto tensor = cost_tensor({CostKind::Repulsive, 3, 1}, {a, b, c});
  REQUIRE(tensor.values.size() == 1);
  CHECK(tensor.values[0] == -68.625);
}

TEST_CASE("tensor cap honored") {
  const DiscreteMeasure mu(1, {{0.0}, {1.0}}, {0.5, 0.5});
  setenv("MMOT_TENSOR_CAP", "1", 1);
  CHECK_THROWS_AS(cost_tensor({CostKind::Repulsive, 3, 1}, {mu, mu, mu}), TensorTooLarge);
  unsetenv("MMOT_TENSOR_CAP");
  CHECK_NOTHROW(cost_tensor({CostKind::Repulsive, 3, 1}, {mu, mu, mu}));
}

TEST_CASE("decomposition offset values") {
  const DiscreteMeasure zero(1, {{0.0}}, {1.0});
  CHECK(decompose_constant({zero, zero}) == 0.0);

  const DiscreteMeasure one(1, {{1.0}}, {1.0});
  CHECK(decompose_constant({one, one, one}) == 9.0);

  const auto parts = build_counterexample_parts(1, 1);
  CHECK(decompose_constant({parts.mu_c, parts.mu_r, parts.mu_l}) ==
        doctest::Approx(298.125).epsilon(1e-14));
}

TEST_CASE("decomposition identity on random polytope vertices") {
  const auto parts = build_counterexample_parts(1, 2);
  const std::vector<DiscreteMeasure> measures{parts.mu_c, parts.mu_r, parts.mu_l};
  const double offset = decompose_constant(measures);
  const CostSpec rep{CostKind::Repulsive, 3, 1};
  const CostSpec ss{CostKind::SumSquare, 3, 1};
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const SparsePlan plan = random_vertex_plan(measures, seed);
    const double lhs = plan_cost(rep, plan);
    const double rhs = plan_cost(ss, plan) - offset;
    CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(rhs)));
  }
}
