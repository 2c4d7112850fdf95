#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/solver.hpp"

namespace mmot {

namespace {

class MongeObjective {
 public:
  MongeObjective(const DiscreteMeasure& mu, const CostSpec& spec, int num_marginals)
      : mu_(mu), spec_(spec), n_(num_marginals), d_(mu.dim()) {
    tuple_.resize(static_cast<std::size_t>(n_) * d_);
  }

  // Average cost of the plan induced by the permutation tuple (equal masses).
  double value(const std::vector<std::vector<std::size_t>>& maps) {
    double total = 0.0;
    for (std::size_t i = 0; i < mu_.size(); ++i) total += atom_cost(maps, i);
    return total / static_cast<double>(mu_.size());
  }

  double atom_cost(const std::vector<std::vector<std::size_t>>& maps, std::size_t i) {
    fill(0, i);
    for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(n_); ++j) fill(j + 1, maps[j][i]);
    return eval_cost(spec_, tuple_);
  }

 private:
  void fill(std::size_t slot, std::size_t atom) {
    const Point& p = mu_.point(atom);
    for (int a = 0; a < d_; ++a) tuple_[slot * static_cast<std::size_t>(d_) + a] = p[a];
  }

  const DiscreteMeasure& mu_;
  CostSpec spec_;
  int n_;
  int d_;
  std::vector<double> tuple_;
};

double factorial_capped(std::size_t m, double cap) {
  double f = 1.0;
  for (std::size_t i = 2; i <= m; ++i) {
    f *= static_cast<double>(i);
    if (f > cap) return f;
  }
  return f;
}

void exhaustive_recurse(MongeObjective& objective, std::vector<std::vector<std::size_t>>& maps,
                        std::size_t level, double& best_value,
                        std::vector<std::vector<std::size_t>>& best_maps) {
  if (level == maps.size()) {
    const double v = objective.value(maps);
    if (v < best_value) {
      best_value = v;
      best_maps = maps;
    }
    return;
  }
  std::iota(maps[level].begin(), maps[level].end(), 0);
  do {
    exhaustive_recurse(objective, maps, level + 1, best_value, best_maps);
  } while (std::next_permutation(maps[level].begin(), maps[level].end()));
}

// First-improvement 2-swap descent over all maps; returns the local value.
double descend(MongeObjective& objective, std::vector<std::vector<std::size_t>>& maps) {
  const std::size_t m = maps.empty() ? 0 : maps[0].size();
  double current = objective.value(maps);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t j = 0; j < maps.size(); ++j) {
      for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a + 1; b < m; ++b) {
          const double before = objective.atom_cost(maps, a) + objective.atom_cost(maps, b);
          std::swap(maps[j][a], maps[j][b]);
          const double after = objective.atom_cost(maps, a) + objective.atom_cost(maps, b);
          if (after < before - 1e-13) {
            current += (after - before) / static_cast<double>(m);
            improved = true;
          } else {
            std::swap(maps[j][a], maps[j][b]);
          }
        }
      }
    }
  }
  return current;
}

}  // namespace

MongeReport monge_search(const DiscreteMeasure& mu, const CostSpec& spec,
                         const MongeOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const double w0 = 1.0 / static_cast<double>(mu.size());
  for (double w : mu.weights())
    if (std::abs(w - w0) > 1e-12)
      throw NotEquallyWeighted("monge search requires equal atom masses");
  if (opts.num_marginals < 2) throw InvalidInput("need at least two marginals");

  const std::size_t m = mu.size();
  const std::size_t n_maps = static_cast<std::size_t>(opts.num_marginals) - 1;
  MongeObjective objective(mu, spec, opts.num_marginals);

  std::vector<std::vector<std::size_t>> maps(n_maps, std::vector<std::size_t>(m));
  std::vector<std::vector<std::size_t>> best_maps = maps;
  double best_value = 0.0;

  if (opts.mode == MongeMode::Exhaustive) {
    const double fact = factorial_capped(m, static_cast<double>(opts.exhaustive_budget));
    if (std::pow(fact, static_cast<double>(n_maps)) >
        static_cast<double>(opts.exhaustive_budget))
      throw BudgetExceeded("(m!)^(N-1) exceeds the exhaustive search budget");
    best_value = std::numeric_limits<double>::infinity();
    exhaustive_recurse(objective, maps, 0, best_value, best_maps);
  } else {
    std::mt19937_64 rng(opts.seed);
    best_value = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= opts.restarts; ++s) {
      for (auto& map : maps) {
        std::iota(map.begin(), map.end(), 0);
        if (s > 0) std::shuffle(map.begin(), map.end(), rng);
      }
      const double v = descend(objective, maps);
      if (v < best_value) {
        best_value = v;
        best_maps = maps;
      }
    }
  }

  MongeTuple tuple;
  tuple.base = 0;
  tuple.maps = best_maps;

  MongeReport result;
  result.best = tuple;
  result.report.method = "monge_search";
  result.report.plan = plan_from_monge(mu, tuple);
  result.report.value = plan_cost(spec, *result.report.plan);
  result.report.iterations = 0;
  result.report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace mmot
