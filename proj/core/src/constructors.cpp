#include "mmot/constructors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

namespace {

constexpr double kMassEps = 1e-15;

bool equal_masses(const DiscreteMeasure& mu) {
  const double w0 = 1.0 / static_cast<double>(mu.size());
  for (double w : mu.weights())
    if (std::abs(w - w0) > 1e-12) return false;
  return true;
}

}  // namespace

SparsePlan plan_from_monge(const DiscreteMeasure& mu, const MongeTuple& tuple) {
  if (!equal_masses(mu))
    throw NotEquallyWeighted("map-induced plans require equal atom masses");
  const std::size_t m = mu.size();
  for (const auto& map : tuple.maps) {
    if (map.size() != m) throw InvalidInput("permutation size mismatch");
    std::vector<bool> hit(m, false);
    for (std::size_t i : map) {
      if (i >= m || hit[i]) throw InvalidInput("map is not a permutation");
      hit[i] = true;
    }
  }

  const std::size_t n = tuple.maps.size() + 1;
  std::vector<PlanAtom> atoms(m);
  for (std::size_t i = 0; i < m; ++i) {
    atoms[i].idx.resize(n);
    atoms[i].idx[0] = i;
    for (std::size_t j = 0; j + 1 < n; ++j) atoms[i].idx[j + 1] = tuple.maps[j][i];
    atoms[i].mass = mu.weight(i);
  }
  return SparsePlan(std::vector<DiscreteMeasure>(n, mu), std::move(atoms));
}

namespace {

// 1-d northwest corner coupling of mu1 ascending against mu2 descending,
// as (index1, index2, mass) triples.
struct Pairing {
  std::size_t i, j;
  double mass;
};

std::vector<Pairing> anti_monotone_pairs(const std::vector<double>& x1,
                                         const std::vector<double>& w1,
                                         const std::vector<double>& x2,
                                         const std::vector<double>& w2) {
  std::vector<std::size_t> ord1(x1.size()), ord2(x2.size());
  std::iota(ord1.begin(), ord1.end(), 0);
  std::iota(ord2.begin(), ord2.end(), 0);
  std::sort(ord1.begin(), ord1.end(), [&](std::size_t a, std::size_t b) { return x1[a] < x1[b]; });
  std::sort(ord2.begin(), ord2.end(), [&](std::size_t a, std::size_t b) { return x2[a] > x2[b]; });

  std::vector<double> r1(w1), r2(w2);
  std::vector<Pairing> pairs;
  std::size_t a = 0, b = 0;
  while (a < ord1.size() && b < ord2.size()) {
    const std::size_t i = ord1[a], j = ord2[b];
    const double t = std::min(r1[i], r2[j]);
    if (t > kMassEps) pairs.push_back({i, j, t});
    r1[i] -= t;
    r2[j] -= t;
    if (r1[i] <= kMassEps) ++a;
    if (r2[j] <= kMassEps) ++b;
  }
  return pairs;
}

// Sorted distinct coordinate values per axis if the measure is a uniform
// product grid, empty otherwise.
std::vector<std::vector<double>> product_axes(const DiscreteMeasure& mu) {
  const int d = mu.dim();
  std::vector<std::set<double>> axis_sets(d);
  for (const auto& p : mu.points())
    for (int a = 0; a < d; ++a) axis_sets[a].insert(p[a]);

  std::size_t expected = 1;
  for (int a = 0; a < d; ++a) expected *= axis_sets[a].size();
  if (expected != mu.size()) return {};
  if (!equal_masses(mu)) return {};

  std::vector<std::vector<double>> axes(d);
  for (int a = 0; a < d; ++a) axes[a].assign(axis_sets[a].begin(), axis_sets[a].end());
  return axes;
}

}  // namespace

SparsePlan anti_monotone_plan(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2) {
  if (mu1.dim() != mu2.dim()) throw InvalidInput("marginal dimensions differ");
  const int d = mu1.dim();

  if (d == 1) {
    std::vector<double> x1(mu1.size()), x2(mu2.size());
    for (std::size_t i = 0; i < mu1.size(); ++i) x1[i] = mu1.point(i)[0];
    for (std::size_t i = 0; i < mu2.size(); ++i) x2[i] = mu2.point(i)[0];
    std::vector<PlanAtom> atoms;
    for (const auto& pr : anti_monotone_pairs(x1, mu1.weights(), x2, mu2.weights()))
      atoms.push_back({{pr.i, pr.j}, pr.mass});
    return SparsePlan({mu1, mu2}, std::move(atoms));
  }

  // d > 1: componentwise construction on uniform product grids.
  const auto axes1 = product_axes(mu1);
  const auto axes2 = product_axes(mu2);
  if (axes1.empty() || axes2.empty())
    throw InvalidDomain("componentwise anti-monotone coupling needs uniform product grids");

  // Per-axis couplings of the uniform axis marginals, then their product.
  std::vector<std::vector<Pairing>> axis_pairs(d);
  for (int a = 0; a < d; ++a) {
    std::vector<double> w1(axes1[a].size(), 1.0 / axes1[a].size());
    std::vector<double> w2(axes2[a].size(), 1.0 / axes2[a].size());
    axis_pairs[a] = anti_monotone_pairs(axes1[a], w1, axes2[a], w2);
  }

  std::vector<PlanAtom> atoms;
  std::vector<std::size_t> choice(d, 0);
  while (true) {
    Point p1(d), p2(d);
    double mass = 1.0;
    for (int a = 0; a < d; ++a) {
      const Pairing& pr = axis_pairs[a][choice[a]];
      p1[a] = axes1[a][pr.i];
      p2[a] = axes2[a][pr.j];
      mass *= pr.mass;
    }
    const long i1 = mu1.find_atom(p1);
    const long i2 = mu2.find_atom(p2);
    atoms.push_back({{static_cast<std::size_t>(i1), static_cast<std::size_t>(i2)}, mass});

    int a = d - 1;
    for (; a >= 0; --a) {
      if (++choice[a] < axis_pairs[a].size()) break;
      choice[a] = 0;
    }
    if (a < 0) break;
  }
  return SparsePlan({mu1, mu2}, std::move(atoms));
}

SparsePlan gamma0(int d, int n) {
  CounterexampleParts parts = build_counterexample_parts(d, n);
  std::vector<PlanAtom> atoms;
  atoms.reserve(2 * parts.mu_c.size());
  for (std::size_t i = 0; i < parts.mu_c.size(); ++i) {
    const Point& x = parts.mu_c.point(i);
    for (int k = 1; k <= 2; ++k) {
      const double shift = std::pow(3.0, k);
      Point r(d), l(d);
      for (int a = 0; a < d; ++a) {
        r[a] = x[a] + shift;
        l[a] = -(x[a] + r[a]);
      }
      const long ri = parts.mu_r.find_atom(r);
      const long li = parts.mu_l.find_atom(l);
      if (ri < 0 || li < 0) throw SolverFailure("counterexample grids are misaligned");
      atoms.push_back({{i, static_cast<std::size_t>(ri), static_cast<std::size_t>(li)},
                       parts.mu_c.weight(i) / 2.0});
    }
  }
  return SparsePlan({parts.mu_c, parts.mu_r, parts.mu_l}, std::move(atoms));
}

SparsePlan gamma1(int d, int n) {
  const SparsePlan g0 = gamma0(d, n);
  const DiscreteMeasure mu = build_counterexample_measure(d, n);

  // Remap gamma0's support into the combined measure and average over all
  // six coordinate permutations.
  std::vector<PlanAtom> atoms;
  std::array<std::size_t, 3> perm{0, 1, 2};
  for (const auto& atom : g0.atoms()) {
    std::array<std::size_t, 3> in_mu;
    for (std::size_t j = 0; j < 3; ++j) {
      const long i = mu.find_atom(g0.marginal_ref(j).point(atom.idx[j]));
      if (i < 0) throw SolverFailure("combined measure misses a part atom");
      in_mu[j] = static_cast<std::size_t>(i);
    }
    perm = {0, 1, 2};
    do {
      atoms.push_back({{in_mu[perm[0]], in_mu[perm[1]], in_mu[perm[2]]}, atom.mass / 6.0});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return SparsePlan({mu, mu, mu}, std::move(atoms));
}

namespace {

std::uint64_t int_pow(std::uint64_t base, int exp) {
  std::uint64_t v = 1;
  for (int i = 0; i < exp; ++i) v *= base;
  return v;
}

// K base-N digits of z, most significant first. The value is rounded to the
// nearest K-digit rational, which resolves the digit ambiguity of N-adic
// rationals toward the terminating representation.
std::vector<int> extract_digits(int base, double z, int depth) {
  if (z < 0.0 || z > 1.0) throw InvalidInput("fractal map argument outside [0,1]");
  const std::uint64_t scale = int_pow(static_cast<std::uint64_t>(base), depth);
  std::uint64_t j = static_cast<std::uint64_t>(std::llround(z * static_cast<double>(scale)));
  if (j >= scale) j = scale - 1;
  std::vector<int> digits(static_cast<std::size_t>(depth));
  for (int k = depth - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = static_cast<int>(j % base);
    j /= static_cast<std::uint64_t>(base);
  }
  return digits;
}

double assemble(int base, const std::vector<int>& digits) {
  std::uint64_t j = 0;
  for (int a : digits) j = j * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(a);
  return static_cast<double>(j) / static_cast<double>(int_pow(base, static_cast<int>(digits.size())));
}

}  // namespace

double fractal_orbit(int base, double z, int depth, int power) {
  if (base < 2) throw InvalidInput("fractal base must be >= 2");
  if (depth < 1) throw InvalidInput("digit truncation must be >= 1");
  std::vector<int> digits = extract_digits(base, z, depth);
  for (int& a : digits) a = (a + power) % base;
  return assemble(base, digits);
}

double fractal_map(int base, double z, int depth) { return fractal_orbit(base, z, depth, 1); }

std::uint64_t fractal_map_grid(int base, std::uint64_t j, int depth) {
  const std::uint64_t scale = int_pow(static_cast<std::uint64_t>(base), depth);
  if (j >= scale) throw InvalidInput("grid index out of range");
  std::uint64_t out = 0, pos = scale;
  for (int k = 0; k < depth; ++k) {
    pos /= static_cast<std::uint64_t>(base);
    const std::uint64_t digit = (j / pos) % static_cast<std::uint64_t>(base);
    out += ((digit + 1) % static_cast<std::uint64_t>(base)) * pos;
  }
  return out;
}

FractalPlanResult fractal_plan(int base, int d, int samples_per_axis, int depth) {
  if (samples_per_axis < 1) throw InvalidInput("need at least one sample per axis");
  if (d < 1) throw InvalidInput("dimension must be >= 1");
  const int n = base;  // number of marginals equals the digit base

  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(samples_per_axis);

  std::vector<std::vector<double>> tuples;
  tuples.reserve(total);
  double max_dev = 0.0;
  std::vector<std::size_t> digits_idx(d, 0);
  for (std::size_t s = 0; s < total; ++s) {
    std::vector<double> tuple(static_cast<std::size_t>(n) * d);
    for (int a = 0; a < d; ++a) {
      const double z = static_cast<double>(digits_idx[a]) / samples_per_axis;
      double orbit_sum = 0.0;
      for (int p = 0; p < n; ++p) {
        const double v = p == 0 ? z : fractal_orbit(base, z, depth, p);
        tuple[static_cast<std::size_t>(p) * d + a] = v;
        orbit_sum += v;
      }
      max_dev = std::max(max_dev, std::abs(orbit_sum - n / 2.0));
    }
    tuples.push_back(std::move(tuple));
    for (int a = d - 1; a >= 0; --a) {
      if (++digits_idx[a] < static_cast<std::size_t>(samples_per_axis)) break;
      digits_idx[a] = 0;
    }
  }

  std::vector<double> masses(total, 1.0 / static_cast<double>(total));
  return FractalPlanResult{
      plan_from_coordinate_tuples(d, static_cast<std::size_t>(n), tuples, masses), max_dev};
}

SparsePlan reflection_plan(const DiscreteMeasure& mu, int num_marginals) {
  if (num_marginals < 2 || num_marginals % 2 != 0)
    throw InvalidDomain("cyclical reflection plan requires an even marginal count");
  if (!mu.symmetric_under_negation())
    throw InvalidDomain("marginal must be invariant under x -> -x");

  std::vector<PlanAtom> atoms(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Point neg(mu.point(i));
    for (double& c : neg) c = -c;
    const std::size_t ni = static_cast<std::size_t>(mu.find_atom(neg));
    atoms[i].idx.resize(static_cast<std::size_t>(num_marginals));
    for (int j = 0; j < num_marginals; ++j)
      atoms[i].idx[static_cast<std::size_t>(j)] = j % 2 == 0 ? i : ni;
    atoms[i].mass = mu.weight(i);
  }
  return SparsePlan(std::vector<DiscreteMeasure>(static_cast<std::size_t>(num_marginals), mu),
                    std::move(atoms));
}

SparsePlan fat_plan(int resolution) {
  if (resolution < 2) throw InvalidInput("quadrature resolution must be >= 2");

  // Orthonormal basis of the plane {x1 + x2 + x3 = 0}.
  const double e1 = 1.0 / std::sqrt(2.0);
  const double e2 = 1.0 / std::sqrt(6.0);
  const double lim = 2.0;  // covers the hexagon's extent in plane coordinates

  std::vector<std::vector<double>> tuples;
  std::vector<double> masses;
  double total = 0.0;
  for (int iu = 0; iu < resolution; ++iu) {
    const double u = -lim + (iu + 0.5) * 2.0 * lim / resolution;
    for (int iv = 0; iv < resolution; ++iv) {
      const double v = -lim + (iv + 0.5) * 2.0 * lim / resolution;
      const double x1 = u * e1 + v * e2;
      const double x2 = -u * e1 + v * e2;
      const double x3 = -(x1 + x2);  // exact zero sum after rounding
      if (std::abs(x1) > 1.0 || std::abs(x2) > 1.0 || std::abs(x3) > 1.0) continue;
      const double density = std::max({std::abs(x1), std::abs(x2), std::abs(x3)});
      if (density <= 0.0) continue;
      tuples.push_back({x1, x2, x3});
      masses.push_back(density);
      total += density;
    }
  }
  if (tuples.empty()) throw InvalidInput("quadrature produced no support points");
  for (double& w : masses) w /= total;
  return plan_from_coordinate_tuples(1, 3, tuples, masses);
}

}  // namespace mmot
