#pragma once

#include <string>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/measure.hpp"
#include "mmot/plan.hpp"

namespace mmot {

enum class Verdict { CertifiedOptimal, GapReported };

// Optimality report for the hyperplane criterion: a coupling supported on
// {x_1 + ... + x_N = k}, with k the sum of the marginal means, minimizes
// every h(sum x_i) cost with h convex. The vector k and the scalar bound
// |k|^2 are stored separately.
struct Certificate {
  Point k;                         // sum of marginal means
  double max_deviation = 0.0;      // max over support of |sum x_i - k|
  double jensen_bound = 0.0;       // |k|^2
  double plan_sum_square_cost = 0.0;
  double gap = 0.0;                // sum-square cost minus Jensen bound
  Verdict verdict = Verdict::GapReported;
  double tolerance = 0.0;          // deviation tolerance used
};

std::string verdict_name(Verdict v);

// Scale-aware default tolerance: 1e-9 * (1 + diameter^2) with diameter the
// bounding-box diagonal of the plan support. Pass tol < 0 to use it.
double default_certificate_tolerance(const SparsePlan& plan);

// Certifies a plan for the sum-square or repulsive cost (the two share
// minimizers). Attractive costs are refused.
Certificate hyperplane_certificate(const SparsePlan& plan, double tol = -1.0);

// |sum_j mean(mu_j)|^2, a lower bound on the sum-square cost of every
// coupling of these marginals.
double jensen_bound(const std::vector<DiscreteMeasure>& measures);

// plan_cost(sum_square) - jensen_bound; identical for the repulsive cost
// since the decomposition offset is plan independent.
double optimality_gap(const SparsePlan& plan, const CostSpec& spec);

}  // namespace mmot
