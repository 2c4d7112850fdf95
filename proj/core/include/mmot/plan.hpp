#pragma once

#include <cstddef>
#include <vector>

#include "mmot/cost.hpp"
#include "mmot/measure.hpp"

namespace mmot {

struct PlanAtom {
  std::vector<std::size_t> idx;  // one atom index per marginal
  double mass = 0.0;
};

// Sparse N-way coupling over atom indices of N discrete marginals.
// Atoms with duplicate index tuples are merged at construction; masses must
// sum to 1 within 1e-12 and every projection must match the corresponding
// marginal's weights within `feas_tol` (default 1e-9).
class SparsePlan {
 public:
  SparsePlan(std::vector<DiscreteMeasure> marginals, std::vector<PlanAtom> atoms,
             double feas_tol = 1e-9);

  std::size_t num_marginals() const { return marginals_.size(); }
  const std::vector<DiscreteMeasure>& marginals() const { return marginals_; }
  const DiscreteMeasure& marginal_ref(std::size_t j) const { return marginals_[j]; }
  const std::vector<PlanAtom>& atoms() const { return atoms_; }

  // Flattened (N*d) coordinate tuple of atom `a`.
  std::vector<double> coords(std::size_t a) const;

 private:
  std::vector<DiscreteMeasure> marginals_;
  std::vector<PlanAtom> atoms_;
};

// Builds a plan from raw support tuples (each flattened N*d) and masses;
// the marginals are the coordinate projections of the tuples themselves.
SparsePlan plan_from_coordinate_tuples(int d, std::size_t num_marginals,
                                       const std::vector<std::vector<double>>& tuples,
                                       const std::vector<double>& masses);

// Pushforward of the plan under the j-th coordinate projection (0-based).
DiscreteMeasure marginal(const SparsePlan& plan, std::size_t j);

double plan_cost(const CostSpec& spec, const SparsePlan& plan);

// Average of all N! coordinate permutations. Requires all marginals equal.
SparsePlan symmetrize(const SparsePlan& plan);

// Disintegration fan-out of the plan over one coordinate.
struct GraphDiagnostic {
  std::size_t coordinate = 0;
  // multiplicity[i] = number of distinct partner tuples of marginal atom i
  // with conditional mass above the threshold; absent atoms carry no mass.
  std::vector<std::size_t> multiplicity;
  std::size_t max_multiplicity = 0;
  std::size_t min_multiplicity = 0;
  bool is_graphical = false;
};

GraphDiagnostic graph_multiplicity(const SparsePlan& plan, std::size_t j,
                                   double mass_tol = 1e-10);

struct BlockCheck {
  bool ok = true;
  // Offending atom positions in plan.atoms().
  std::vector<std::size_t> violations;
};

// True iff every support atom matches L^k x C x R^k up to permutation with
// the same k for the L and R coordinates. N = 3 only.
BlockCheck check_block_structure(const SparsePlan& plan, const BlockLayout& layout);

// Pushforward under the piecewise coordinate permutation that maps every
// support atom into C x R x L. Marginals of the result are the projections.
SparsePlan reorder_blocks(const SparsePlan& plan, const BlockLayout& layout);

}  // namespace mmot
