#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmot/constructors.hpp"
#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"

namespace mmot {

struct Residuals {
  double marginal_violation = 0.0;
  std::optional<double> duality_gap;
};

struct SolveReport {
  double value = 0.0;
  std::optional<SparsePlan> plan;
  std::string method;
  std::size_t iterations = 0;
  Residuals residuals;
  double wall_seconds = 0.0;
  bool converged = true;
  // Final dual potentials (Sinkhorn only), one vector per marginal.
  std::vector<std::vector<double>> potentials;
};

// Exact optimum of the discrete Kantorovich linear program over the coupling
// polytope of `measures`. Returns a vertex (basic) solution; pivoting is
// deterministic (Bland's rule).
SolveReport solve_lp(const std::vector<DiscreteMeasure>& measures, const CostSpec& spec);

// Same LP with an externally supplied cost vector over the flattened tensor
// indices. Used for perturbation re-solves and random vertex sampling.
SolveReport solve_lp_custom(const std::vector<DiscreteMeasure>& measures,
                            const std::vector<double>& cost);

// A vertex of the coupling polytope selected by a seeded random cost vector.
SparsePlan random_vertex_plan(const std::vector<DiscreteMeasure>& measures,
                              std::uint64_t seed);

struct SinkhornOptions {
  double epsilon = 0.1;
  std::size_t max_iter = 10'000;
  double tol = 1e-9;  // L1 marginal violation target
  // Initial dual potentials, one vector per marginal (sizes must match the
  // measures). Empty means a cold start. Chaining the potentials of a larger
  // epsilon run skips the slow transient at small epsilon.
  std::vector<std::vector<double>> warm_start;
};

// Multi-marginal entropic fixed point iteration in the log domain.
// Non-convergence is reported through `converged = false` on the report.
SolveReport solve_sinkhorn(const std::vector<DiscreteMeasure>& measures,
                           const CostSpec& spec, const SinkhornOptions& opts);

enum class MongeMode { Exhaustive, Local };

struct MongeOptions {
  MongeMode mode = MongeMode::Exhaustive;
  int num_marginals = 3;
  std::uint64_t seed = 0;
  std::size_t restarts = 32;
  std::size_t exhaustive_budget = 10'000'000;
};

struct MongeReport {
  SolveReport report;
  MongeTuple best;
};

// Best cost over map-induced plans (id, T_1, ..., T_{N-1}) with each T_i an
// atom permutation of mu. Exhaustive mode enumerates all (m!)^(N-1)
// candidates; local mode runs seeded multi-start 2-swap hill climbing and
// returns an upper bound.
MongeReport monge_search(const DiscreteMeasure& mu, const CostSpec& spec,
                         const MongeOptions& opts);

}  // namespace mmot
