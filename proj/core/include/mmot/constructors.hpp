#pragma once

#include <cstdint>
#include <vector>

#include "mmot/measure.hpp"
#include "mmot/plan.hpp"

namespace mmot {

// N-1 atom permutations of a common equal-mass marginal; the induced plan
// is (id, T_1, ..., T_{N-1}) applied to the atom list.
struct MongeTuple {
  std::size_t base = 0;
  std::vector<std::vector<std::size_t>> maps;
};

SparsePlan plan_from_monge(const DiscreteMeasure& mu, const MongeTuple& tuple);

// Coupling of mu1 sorted ascending against mu2 sorted descending
// (northwest corner rule on the reversed order). For d > 1 both marginals
// must be uniform product grids; the coupling is built componentwise.
// Minimizes the integral of |x1 + x2|^2 over all couplings.
SparsePlan anti_monotone_plan(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2);

// The two-branch plan placing, for every C atom x, mass w(x)/2 on
// (x, x + 3^k, -2x - 3^k) for k = 1, 2. Marginals are exactly
// (mu_C, mu_R, mu_L) of build_counterexample_parts(d, n) and every atom
// tuple sums to the zero vector.
SparsePlan gamma0(int d, int n);

// Symmetrization of gamma0 over the combined measure
// mu = (mu_L + mu_C + mu_R)/3: all three marginals equal mu.
SparsePlan gamma1(int d, int n);

// Base-N digit shift map: digits of z are computed to K places, each digit
// shifted cyclically (i -> i+1 mod N), and reassembled. Truncation error
// is at most N^-K.
double fractal_map(int base, double z, int depth);

// p-fold application of the digit shift, from a single digit extraction.
double fractal_orbit(int base, double z, int depth, int power);

// Exact version on the N-adic grid: z = j / base^depth is mapped to
// j' / base^depth with integer digit arithmetic.
std::uint64_t fractal_map_grid(int base, std::uint64_t j, int depth);

struct FractalPlanResult {
  SparsePlan plan;
  // max over atoms of |sum of orbit coordinates - N/2| (per coordinate,
  // worst case); bounded by d * N * N^-K.
  double max_orbit_deviation;
};

// Empirical plan through the orbit (id, T, ..., T^{N-1}) on the uniform grid
// {i / samples_per_axis} of [0,1]^d.
FractalPlanResult fractal_plan(int base, int d, int samples_per_axis, int depth);

// Plan induced by the orbit of x -> -x: (x, -x, x, -x, ...), N even.
// Requires mu invariant under negation; every atom tuple sums to zero.
SparsePlan reflection_plan(const DiscreteMeasure& mu, int num_marginals);

// Quadrature discretization of the diffuse plan supported on the hexagon
// {x1 + x2 + x3 = 0} intersected with [-1,1]^3, density proportional to
// max(|x1|, |x2|, |x3|), renormalized to total mass 1. d = 1, N = 3.
SparsePlan fat_plan(int resolution);

}  // namespace mmot
