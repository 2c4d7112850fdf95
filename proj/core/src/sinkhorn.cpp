#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/solver.hpp"

namespace mmot {

namespace {

struct OnlineLse {
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0.0;

  void add(double s) {
    if (s <= max) {
      sum += std::exp(s - max);
    } else {
      sum = sum * std::exp(max - s) + 1.0;
      max = s;
    }
  }

  void reset() {
    max = -std::numeric_limits<double>::infinity();
    sum = 0.0;
  }

  double value() const { return max + std::log(sum); }
};

}  // namespace

SolveReport solve_sinkhorn(const std::vector<DiscreteMeasure>& measures,
                           const CostSpec& spec, const SinkhornOptions& opts) {
  if (!(opts.epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = measures.size();

  // Zero-weight atoms take no part in the iteration.
  std::vector<std::vector<std::size_t>> active(n);
  std::vector<std::vector<double>> logw(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < measures[j].size(); ++i) {
      if (measures[j].weight(i) > 0.0) {
        active[j].push_back(i);
        logw[j].push_back(std::log(measures[j].weight(i)));
      }
    }
  }

  std::size_t total = 1;
  const std::size_t cap = tensor_cap();
  for (std::size_t j = 0; j < n; ++j) {
    if (active[j].empty()) throw InvalidInput("marginal has no mass");
    if (total > cap / active[j].size())
      throw TensorTooLarge("sinkhorn kernel exceeds the tensor cap");
    total *= active[j].size();
  }

  // Cost over the active grid, flattened row-major.
  const int d = spec.dim;
  std::vector<double> cost(total);
  {
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> tuple(n * static_cast<std::size_t>(d));
    for (std::size_t t = 0; t < total; ++t) {
      for (std::size_t j = 0; j < n; ++j) {
        const Point& p = measures[j].point(active[j][idx[j]]);
        for (int a = 0; a < d; ++a) tuple[j * static_cast<std::size_t>(d) + a] = p[a];
      }
      cost[t] = eval_cost(spec, tuple);
      for (std::size_t j = n; j-- > 0;) {
        if (++idx[j] < active[j].size()) break;
        idx[j] = 0;
      }
    }
  }

  std::vector<std::size_t> strides(n, 1);
  for (std::size_t j = n; j-- > 1;) strides[j - 1] = strides[j] * active[j].size();

  std::vector<std::vector<double>> u(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j].assign(active[j].size(), 0.0);
    if (!opts.warm_start.empty()) {
      if (opts.warm_start.size() != n || opts.warm_start[j].size() != measures[j].size())
        throw InvalidInput("warm start potentials do not match the marginals");
      for (std::size_t i = 0; i < active[j].size(); ++i)
        u[j][i] = opts.warm_start[j][active[j][i]];
    }
  }

  const double eps = opts.epsilon;
  std::vector<std::size_t> idx(n);
  auto for_each_entry = [&](auto&& body) {
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < total; ++t) {
      body(t);
      for (std::size_t j = n; j-- > 0;) {
        if (++idx[j] < active[j].size()) break;
        idx[j] = 0;
      }
    }
  };

  auto measure_violation = [&](std::vector<std::vector<double>>& proj) {
    for (std::size_t j = 0; j < n; ++j) proj[j].assign(active[j].size(), 0.0);
    for_each_entry([&](std::size_t t) {
      double s = -cost[t];
      for (std::size_t l = 0; l < n; ++l) s += u[l][idx[l]];
      const double mass = std::exp(s / eps);
      for (std::size_t j = 0; j < n; ++j) proj[j][idx[j]] += mass;
    });
    double violation = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double l1 = 0.0;
      for (std::size_t i = 0; i < active[j].size(); ++i)
        l1 += std::abs(proj[j][i] - measures[j].weight(active[j][i]));
      violation = std::max(violation, l1);
    }
    return violation;
  };

  std::size_t max_active = 0;
  for (std::size_t j = 0; j < n; ++j) max_active = std::max(max_active, active[j].size());
  std::vector<OnlineLse> lse(max_active);
  std::vector<std::vector<double>> proj(n);

  // The harmonic transient of small-epsilon runs makes per-sweep residual
  // checks wasteful; check on a coarse schedule instead.
  constexpr std::size_t kCheckEvery = 256;
  double violation = std::numeric_limits<double>::infinity();
  std::size_t sweep = 0;
  for (; sweep < opts.max_iter; ++sweep) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t nj = active[j].size();
      for (std::size_t i = 0; i < nj; ++i) lse[i].reset();
      for_each_entry([&](std::size_t t) {
        double s = -cost[t] - u[j][idx[j]];
        for (std::size_t l = 0; l < n; ++l) s += u[l][idx[l]];
        lse[idx[j]].add(s / eps);
      });
      for (std::size_t i = 0; i < nj; ++i) u[j][i] = eps * (logw[j][i] - lse[i].value());
    }
    if ((sweep + 1) % kCheckEvery == 0 || sweep + 1 == opts.max_iter) {
      violation = measure_violation(proj);
      if (violation < opts.tol) {
        ++sweep;
        break;
      }
    }
  }
  if (!std::isfinite(violation)) violation = measure_violation(proj);

  // Materialize the plan and its unregularized cost.
  std::vector<PlanAtom> atoms;
  atoms.reserve(total);
  double mass_total = 0.0;
  double value = 0.0;
  for_each_entry([&](std::size_t t) {
    double s = -cost[t];
    for (std::size_t l = 0; l < n; ++l) s += u[l][idx[l]];
    const double mass = std::exp(s / eps);
    if (mass <= 0.0) return;
    PlanAtom atom;
    atom.idx.resize(n);
    for (std::size_t j = 0; j < n; ++j) atom.idx[j] = active[j][idx[j]];
    atom.mass = mass;
    atoms.push_back(std::move(atom));
    mass_total += mass;
    value += mass * cost[t];
  });
  for (auto& atom : atoms) atom.mass /= mass_total;
  value /= mass_total;

  SolveReport report;
  report.method = "sinkhorn";
  report.value = value;
  report.iterations = sweep;
  report.converged = violation < opts.tol;
  report.residuals.marginal_violation = violation;
  report.potentials.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    report.potentials[j].assign(measures[j].size(), 0.0);
    for (std::size_t i = 0; i < active[j].size(); ++i)
      report.potentials[j][active[j][i]] = u[j][i];
  }
  report.plan = SparsePlan(measures, std::move(atoms), std::max(1e-9, 2.0 * violation));
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mmot
