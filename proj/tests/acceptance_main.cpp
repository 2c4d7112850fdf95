// Acceptance suite: one line per criterion, PASS or FAIL, nonzero exit if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmot/certificate.hpp"
#include "mmot/constructors.hpp"
#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"
#include "mmot/solver.hpp"

using namespace mmot;

namespace {

struct Checker {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      if (!ok) detail << "; ";
      detail << msg;
      ok = false;
    }
  }
};

std::vector<std::vector<std::size_t>> support(const SparsePlan& plan) {
  std::vector<std::vector<std::size_t>> keys;
  for (const auto& atom : plan.atoms()) keys.push_back(atom.idx);
  std::sort(keys.begin(), keys.end());
  return keys;
}

double mass_distance(const SparsePlan& a, const SparsePlan& b) {
  std::map<std::vector<std::size_t>, double> ma, mb;
  for (const auto& atom : a.atoms()) ma[atom.idx] = atom.mass;
  for (const auto& atom : b.atoms()) mb[atom.idx] = atom.mass;
  double worst = 0.0;
  for (const auto& [idx, v] : ma)
    worst = std::max(worst, std::abs(v - (mb.count(idx) ? mb.at(idx) : 0.0)));
  for (const auto& [idx, v] : mb)
    if (!ma.count(idx)) worst = std::max(worst, v);
  return worst;
}

// Equal-mass atomization of the combined measure: m/3 atoms in the center
// block, m/6 in each side block, all at sub-interval midpoints.
DiscreteMeasure gap_measure(int m) {
  std::vector<Point> pts;
  std::vector<double> w;
  auto fill = [&](double lo, double hi, int count) {
    for (int i = 0; i < count; ++i) {
      pts.push_back({lo + (hi - lo) * (2.0 * i + 1.0) / (2.0 * count)});
      w.push_back(1.0 / m);
    }
  };
  fill(0.0, 0.5, m / 3);
  for (int k = 1; k <= 2; ++k) {
    const double p = std::pow(3.0, k);
    fill(p, p + 0.5, m / 6);
    fill(-p - 1.0, -p, m / 6);
  }
  return DiscreteMeasure(1, std::move(pts), std::move(w));
}

double binned_l1_to_uniform(const DiscreteMeasure& mu, double lo, double hi, int bins) {
  std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double t = (mu.point(i)[0] - lo) / (hi - lo);
    int b = static_cast<int>(t * bins);
    b = std::clamp(b, 0, bins - 1);
    mass[static_cast<std::size_t>(b)] += mu.weight(i);
  }
  double err = 0.0;
  for (double v : mass) err += std::abs(v - 1.0 / bins);
  return err;
}

// Criteria 1-3 at a given dimension; criterion 10 reuses them at d=2.
void run_reproduction(Checker& c, int d, const std::vector<int>& n_list) {
  const CostSpec rep{CostKind::Repulsive, 3, d};
  for (int n : n_list) {
    const auto parts = build_counterexample_parts(d, n);
    const auto lp = solve_lp({parts.mu_c, parts.mu_r, parts.mu_l}, rep);
    const SparsePlan g0 = gamma0(d, n);
    c.require(support(*lp.plan) == support(g0),
              "n=" + std::to_string(n) + " support differs from the two-branch plan");
    c.require(std::abs(lp.value - plan_cost(rep, g0)) <= 1e-9,
              "n=" + std::to_string(n) + " value off the constructed plan");
  }
}

void run_symmetric(Checker& c, int d, const std::vector<int>& n_list) {
  const CostSpec rep{CostKind::Repulsive, 3, d};
  for (int n : n_list) {
    const auto mu = build_counterexample_measure(d, n);
    const auto lp = solve_lp({mu, mu, mu}, rep);
    const SparsePlan sym = symmetrize(*lp.plan);
    const SparsePlan g1 = gamma1(d, n);
    c.require(mass_distance(sym, g1) <= 1e-9,
              "n=" + std::to_string(n) + " symmetrized optimum differs from gamma1");

    const BlockLayout layout{d};
    for (std::size_t j = 0; j < 3; ++j) {
      const auto diag = graph_multiplicity(sym, j);
      c.require(!diag.is_graphical, "coordinate yields a graphical optimum");
      if (j != 0) continue;
      const auto& marg = sym.marginal_ref(0);
      for (std::size_t i = 0; i < marg.size(); ++i) {
        if (layout.classify(marg.point(i)) == BlockLayout::Block::C)
          c.require(diag.multiplicity[i] == 4, "center-block multiplicity is not 4");
        else
          c.require(diag.multiplicity[i] >= 2, "side-block multiplicity below 2");
      }
    }
  }
}

using CriterionFn = std::function<void(Checker&)>;

void criterion_1(Checker& c) {
  run_reproduction(c, 1, {1, 2, 4});
  const auto parts = build_counterexample_parts(1, 1);
  const auto lp = solve_lp({parts.mu_c, parts.mu_r, parts.mu_l}, {CostKind::Repulsive, 3, 1});
  c.require(std::abs(lp.value - (-298.125)) <= 1e-9, "n=1 value is not -298.125");
}

void criterion_2(Checker& c) {
  const SparsePlan g0 = gamma0(1, 2);
  const Certificate cert = hyperplane_certificate(g0);
  c.require(cert.k == Point{0.0}, "hyperplane constant nonzero");
  c.require(cert.max_deviation == 0.0, "nonzero deviation");
  c.require(cert.gap == 0.0, "nonzero certificate gap");
  c.require(cert.verdict == Verdict::CertifiedOptimal, "not certified");

  const auto parts = build_counterexample_parts(1, 2);
  const std::vector<DiscreteMeasure> trio{parts.mu_c, parts.mu_r, parts.mu_l};
  const CostSpec rep{CostKind::Repulsive, 3, 1};
  const auto base = solve_lp(trio, rep);
  auto tensor = cost_tensor(rep, trio);
  for (std::size_t t = 0; t < tensor.values.size(); ++t)
    tensor.values[t] += 1e-7 * std::sin(static_cast<double>(t) + 1.0);
  const auto jittered = solve_lp_custom(trio, tensor.values);
  c.require(support(*jittered.plan) == support(*base.plan),
            "perturbed cost moved the optimal support");
}

void criterion_3(Checker& c) { run_symmetric(c, 1, {1, 2, 4}); }

void criterion_4(Checker& c) {
  const auto mu = gap_measure(6);
  const CostSpec rep{CostKind::Repulsive, 3, 1};
  const auto lp = solve_lp({mu, mu, mu}, rep);
  MongeOptions opts;
  opts.num_marginals = 3;
  const auto monge = monge_search(mu, rep, opts);
  const double gap = monge.report.value - lp.value;
  std::ostringstream g;
  g.precision(3);
  g << "monge minus lp gap is " << gap << ", not > 1e-6";
  c.require(gap > 1e-6, g.str());
}

void criterion_5(Checker& c) {
  const auto parts1 = build_counterexample_parts(1, 1);
  const auto parts2 = build_counterexample_parts(1, 2);
  const auto mu = build_counterexample_measure(1, 1);
  const std::vector<std::vector<DiscreteMeasure>> instances{
      {parts1.mu_c, parts1.mu_r, parts1.mu_l},
      {parts2.mu_c, parts2.mu_r, parts2.mu_l},
      {mu, mu, mu}};
  const CostSpec rep{CostKind::Repulsive, 3, 1};
  const CostSpec ss{CostKind::SumSquare, 3, 1};
  for (const auto& measures : instances) {
    const double offset = decompose_constant(measures);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const SparsePlan plan = random_vertex_plan(measures, seed);
      const double lhs = plan_cost(rep, plan);
      const double rhs = plan_cost(ss, plan);
      const double scale = std::abs(rhs) + offset;
      c.require(std::abs(lhs - rhs + offset) <= 1e-9 * (1.0 + scale),
                "decomposition identity violated at seed " + std::to_string(seed));
    }
  }
}

void criterion_6(Checker& c) {
  std::mt19937_64 rng(2024);
  int done = 0;
  while (done < 20) {
    const int m = 2 + static_cast<int>(rng() % 5);
    // Dyadic coordinates keep both cost evaluations bit-identical.
    std::vector<Point> p1, p2;
    for (int i = 0; i < m; ++i) {
      p1.push_back({static_cast<double>(static_cast<int>(rng() % 129) - 64) / 32.0});
      p2.push_back({static_cast<double>(static_cast<int>(rng() % 129) - 64) / 32.0});
    }
    std::sort(p1.begin(), p1.end());
    std::sort(p2.begin(), p2.end());
    p1.erase(std::unique(p1.begin(), p1.end()), p1.end());
    p2.erase(std::unique(p2.begin(), p2.end()), p2.end());
    if (static_cast<int>(p1.size()) != m || static_cast<int>(p2.size()) != m) continue;
    ++done;

    std::vector<double> w(static_cast<std::size_t>(m), 1.0 / m);
    const DiscreteMeasure mu1(1, p1, w), mu2(1, p2, w);
    const CostSpec rep{CostKind::Repulsive, 2, 1};
    const double got = plan_cost(rep, anti_monotone_plan(mu1, mu2));

    std::vector<std::size_t> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      std::vector<PlanAtom> atoms;
      for (std::size_t i = 0; i < perm.size(); ++i) atoms.push_back({{i, perm[i]}, 1.0 / m});
      best = std::min(best, plan_cost(rep, SparsePlan({mu1, mu2}, std::move(atoms))));
    } while (std::next_permutation(perm.begin(), perm.end()));
    c.require(got == best, "anti-monotone cost differs from the permutation minimum");
  }
}

void criterion_7(Checker& c) {
  const int K = 10;
  const double bound = 3.0 * std::pow(3.0, -K);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double z = unit(rng);
    const double sum = z + fractal_orbit(3, z, K, 1) + fractal_orbit(3, z, K, 2);
    c.require(std::abs(sum - 1.5) <= bound, "orbit sum outside the digit bound");
  }
  const std::uint64_t cells = 243;  // 3^5
  std::vector<bool> hit(cells, false);
  bool bijective = true;
  for (std::uint64_t j = 0; j < cells; ++j) {
    const std::uint64_t img = fractal_map_grid(3, j, 5);
    if (img >= cells || hit[img]) bijective = false;
    else hit[img] = true;
  }
  c.require(bijective, "grid map is not a permutation of the 3-adic grid");
}

void criterion_8(Checker& c) {
  const SparsePlan plan = fat_plan(200);
  c.require(plan_cost({CostKind::SumSquare, 3, 1}, plan) == 0.0,
            "sum-square cost nonzero");
  for (std::size_t j = 0; j < 3; ++j) {
    const double l1 = binned_l1_to_uniform(plan.marginal_ref(j), -1.0, 1.0, 20);
    std::ostringstream msg;
    msg.precision(3);
    msg << "marginal " << j + 1 << " L1 distance " << l1 << " not < 0.05";
    c.require(l1 < 0.05, msg.str());
  }
}

void criterion_9(Checker& c) {
  const auto parts = build_counterexample_parts(1, 1);
  const std::vector<DiscreteMeasure> trio{parts.mu_c, parts.mu_r, parts.mu_l};
  const CostSpec rep{CostKind::Repulsive, 3, 1};
  const double lp_value = solve_lp(trio, rep).value;

  SinkhornOptions opts;
  opts.tol = 9e-9;
  opts.max_iter = 100'000'000;
  double prev = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (double eps : {1.0, 0.3, 0.1, 0.03}) {
    opts.epsilon = eps;
    const auto report = solve_sinkhorn(trio, rep, opts);
    std::ostringstream tag;
    tag << "eps=" << eps;
    c.require(report.residuals.marginal_violation < 1e-8,
              tag.str() + " marginal violation not < 1e-8");
    c.require(report.value <= prev, tag.str() + " value increased along the sweep");
    prev = report.value;
    last = report.value;
    opts.warm_start = report.potentials;
  }
  c.require(std::abs(last - lp_value) <= 0.05, "eps=0.03 value not within 0.05 of the LP");
}

void criterion_10(Checker& c) {
  run_reproduction(c, 2, {1});
  run_symmetric(c, 2, {1});

  const Certificate cert = hyperplane_certificate(gamma0(2, 1));
  c.require(cert.k == Point{0.0, 0.0}, "hyperplane constant is not the zero vector");

  const auto parts = build_counterexample_parts(2, 1);
  const auto lp = solve_lp({parts.mu_c, parts.mu_r, parts.mu_l}, {CostKind::Repulsive, 3, 2});
  for (std::size_t a = 0; a < lp.plan->atoms().size(); ++a) {
    const auto t = lp.plan->coords(a);
    for (int coord = 0; coord < 2; ++coord)
      c.require(t[coord] + t[2 + coord] + t[4 + coord] == 0.0,
                "optimal tuple sum is not exactly zero");
  }
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    double budget_seconds;
    CriterionFn fn;
  } criteria[] = {
      {1, "counterexample reproduction, d=1, n in {1,2,4}", 15.0, criterion_1},
      {2, "hyperplane certificate and support stability", 5.0, criterion_2},
      {3, "non-graphicality of the symmetric optimum", 30.0, criterion_3},
      {4, "strict Monge gap at m=6", 60.0, criterion_4},
      {5, "cost decomposition on random vertices", 10.0, criterion_5},
      {6, "anti-monotone optimality, 20 random instances", 10.0, criterion_6},
      {7, "fractal orbit sums and grid permutation", 5.0, criterion_7},
      {8, "fat plan marginals and zero sum-square cost", 10.0, criterion_8},
      {9, "sinkhorn epsilon sweep consistency", 30.0, criterion_9},
      {10, "two-dimensional generalization", 30.0, criterion_10},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    Checker check;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.fn(check);
    } catch (const std::exception& e) {
      check.require(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > criterion.budget_seconds) {
      check.require(false, "runtime budget exceeded");
    }
    if (check.ok) {
      std::printf("PASS criterion %2d: %s (%.2fs)\n", criterion.id, criterion.name, seconds);
    } else {
      std::printf("FAIL criterion %2d: %s (%.2fs) -- %s\n", criterion.id, criterion.name,
                  seconds, check.detail.str().c_str());
      ++failures;
    }
  }
  if (failures > 0) std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
