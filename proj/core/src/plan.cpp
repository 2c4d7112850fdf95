#include "mmot/plan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

SparsePlan::SparsePlan(std::vector<DiscreteMeasure> marginals,
                       std::vector<PlanAtom> atoms, double feas_tol)
    : marginals_(std::move(marginals)) {
  const std::size_t n = marginals_.size();
  if (n < 2) throw InvalidInput("plan needs at least two marginals");
  const int d = marginals_[0].dim();
  for (const auto& mu : marginals_)
    if (mu.dim() != d) throw InvalidInput("marginal dimensions differ");

  std::map<std::vector<std::size_t>, double> merged;
  double total = 0.0;
  for (auto& atom : atoms) {
    if (atom.idx.size() != n) throw InvalidInput("atom index tuple has wrong arity");
    for (std::size_t j = 0; j < n; ++j)
      if (atom.idx[j] >= marginals_[j].size())
        throw InvalidInput("atom index out of range");
    if (!(atom.mass >= 0.0)) throw InvalidInput("atom mass must be nonnegative");
    merged[atom.idx] += atom.mass;
    total += atom.mass;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidInput("plan masses sum to " + std::to_string(total) + ", expected 1");

  atoms_.reserve(merged.size());
  for (const auto& [idx, mass] : merged) atoms_.push_back({idx, mass});

  // Feasibility: each projection must reproduce the marginal weights.
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> proj(marginals_[j].size(), 0.0);
    for (const auto& atom : atoms_) proj[atom.idx[j]] += atom.mass;
    for (std::size_t i = 0; i < proj.size(); ++i) {
      if (std::abs(proj[i] - marginals_[j].weight(i)) > feas_tol)
        throw InfeasiblePlan("projection onto marginal " + std::to_string(j) +
                             " deviates by " +
                             std::to_string(std::abs(proj[i] - marginals_[j].weight(i))) +
                             " at atom " + std::to_string(i));
    }
  }
}

std::vector<double> SparsePlan::coords(std::size_t a) const {
  const int d = marginals_[0].dim();
  std::vector<double> tuple(marginals_.size() * static_cast<std::size_t>(d));
  for (std::size_t j = 0; j < marginals_.size(); ++j) {
    const Point& p = marginals_[j].point(atoms_[a].idx[j]);
    for (int c = 0; c < d; ++c) tuple[j * static_cast<std::size_t>(d) + c] = p[c];
  }
  return tuple;
}

SparsePlan plan_from_coordinate_tuples(int d, std::size_t num_marginals,
                                       const std::vector<std::vector<double>>& tuples,
                                       const std::vector<double>& masses) {
  if (tuples.size() != masses.size())
    throw InvalidInput("tuples/masses length mismatch");
  std::vector<DiscreteMeasure> marginals;
  std::vector<std::vector<std::size_t>> slot_index(num_marginals);
  for (std::size_t slot = 0; slot < num_marginals; ++slot) {
    std::vector<Point> points;
    std::vector<double> weights;
    std::map<Point, std::size_t> index;
    slot_index[slot].resize(tuples.size());
    for (std::size_t a = 0; a < tuples.size(); ++a) {
      Point p(tuples[a].begin() + static_cast<long>(slot) * d,
              tuples[a].begin() + static_cast<long>(slot + 1) * d);
      auto [it, inserted] = index.try_emplace(p, points.size());
      if (inserted) {
        points.push_back(std::move(p));
        weights.push_back(masses[a]);
      } else {
        weights[it->second] += masses[a];
      }
      slot_index[slot][a] = it->second;
    }
    marginals.emplace_back(d, std::move(points), std::move(weights));
  }

  std::vector<PlanAtom> atoms(tuples.size());
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    atoms[a].idx.resize(num_marginals);
    for (std::size_t slot = 0; slot < num_marginals; ++slot)
      atoms[a].idx[slot] = slot_index[slot][a];
    atoms[a].mass = masses[a];
  }
  return SparsePlan(std::move(marginals), std::move(atoms));
}

DiscreteMeasure marginal(const SparsePlan& plan, std::size_t j) {
  if (j >= plan.num_marginals()) throw InvalidInput("marginal index out of range");
  const DiscreteMeasure& mu = plan.marginal_ref(j);
  std::vector<double> proj(mu.size(), 0.0);
  for (const auto& atom : plan.atoms()) proj[atom.idx[j]] += atom.mass;

  std::vector<Point> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (proj[i] > 0.0) {
      points.push_back(mu.point(i));
      weights.push_back(proj[i]);
    }
  }
  return DiscreteMeasure(mu.dim(), std::move(points), std::move(weights));
}

double plan_cost(const CostSpec& spec, const SparsePlan& plan) {
  double value = 0.0;
  for (std::size_t a = 0; a < plan.atoms().size(); ++a)
    value += plan.atoms()[a].mass * eval_cost(spec, plan.coords(a));
  return value;
}

SparsePlan symmetrize(const SparsePlan& plan) {
  const std::size_t n = plan.num_marginals();
  for (std::size_t j = 1; j < n; ++j)
    if (!plan.marginal_ref(0).same_atoms(plan.marginal_ref(j)))
      throw NotExchangeable("symmetrize requires all marginals equal");

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double factorial = 1.0;
  for (std::size_t j = 2; j <= n; ++j) factorial *= static_cast<double>(j);

  std::vector<PlanAtom> out;
  do {
    for (const auto& atom : plan.atoms()) {
      PlanAtom image;
      image.idx.resize(n);
      for (std::size_t j = 0; j < n; ++j) image.idx[j] = atom.idx[perm[j]];
      image.mass = atom.mass / factorial;
      out.push_back(std::move(image));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return SparsePlan(plan.marginals(), std::move(out));
}

GraphDiagnostic graph_multiplicity(const SparsePlan& plan, std::size_t j,
                                   double mass_tol) {
  if (j >= plan.num_marginals()) throw InvalidInput("coordinate out of range");
  GraphDiagnostic diag;
  diag.coordinate = j;
  diag.multiplicity.assign(plan.marginal_ref(j).size(), 0);

  std::vector<double> proj(plan.marginal_ref(j).size(), 0.0);
  for (const auto& atom : plan.atoms()) proj[atom.idx[j]] += atom.mass;

  for (const auto& atom : plan.atoms()) {
    const double base = proj[atom.idx[j]];
    if (base <= mass_tol) continue;
    if (atom.mass / base > mass_tol) ++diag.multiplicity[atom.idx[j]];
  }

  bool any = false;
  for (std::size_t i = 0; i < diag.multiplicity.size(); ++i) {
    if (proj[i] <= mass_tol) continue;
    const std::size_t m = diag.multiplicity[i];
    if (!any) {
      diag.max_multiplicity = diag.min_multiplicity = m;
      any = true;
    } else {
      diag.max_multiplicity = std::max(diag.max_multiplicity, m);
      diag.min_multiplicity = std::min(diag.min_multiplicity, m);
    }
  }
  diag.is_graphical = any && diag.max_multiplicity == 1;
  return diag;
}

namespace {

using Block = BlockLayout::Block;

bool is_left(Block b) { return b == Block::L1 || b == Block::L2; }
bool is_right(Block b) { return b == Block::R1 || b == Block::R2; }
int block_k(Block b) {
  if (b == Block::L1 || b == Block::R1) return 1;
  if (b == Block::L2 || b == Block::R2) return 2;
  return 0;
}

// Positions of the C, R and L coordinates of the tuple, or ok=false if the
// atom does not have exactly one coordinate in each with matching k.
struct BlockPattern {
  bool ok = false;
  std::size_t c_pos = 0, r_pos = 0, l_pos = 0;
};

BlockPattern classify_atom(const SparsePlan& plan, const BlockLayout& layout,
                           std::size_t a) {
  BlockPattern pat;
  int n_c = 0, n_r = 0, n_l = 0;
  int k_r = 0, k_l = 0;
  for (std::size_t j = 0; j < 3; ++j) {
    const Point& p = plan.marginal_ref(j).point(plan.atoms()[a].idx[j]);
    const Block b = layout.classify(p);
    if (b == Block::C) {
      ++n_c;
      pat.c_pos = j;
    } else if (is_right(b)) {
      ++n_r;
      pat.r_pos = j;
      k_r = block_k(b);
    } else if (is_left(b)) {
      ++n_l;
      pat.l_pos = j;
      k_l = block_k(b);
    } else {
      return pat;
    }
  }
  pat.ok = n_c == 1 && n_r == 1 && n_l == 1 && k_r == k_l;
  return pat;
}

}  // namespace

BlockCheck check_block_structure(const SparsePlan& plan, const BlockLayout& layout) {
  if (plan.num_marginals() != 3)
    throw InvalidInput("block structure check is defined for N = 3");
  BlockCheck result;
  for (std::size_t a = 0; a < plan.atoms().size(); ++a) {
    if (!classify_atom(plan, layout, a).ok) {
      result.ok = false;
      result.violations.push_back(a);
    }
  }
  return result;
}

SparsePlan reorder_blocks(const SparsePlan& plan, const BlockLayout& layout) {
  if (plan.num_marginals() != 3)
    throw InvalidInput("block reordering is defined for N = 3");
  const int d = plan.marginal_ref(0).dim();

  // Collect the permuted coordinate tuples (C, R, L slot order).
  std::vector<std::array<Point, 3>> tuples;
  std::vector<double> masses;
  for (std::size_t a = 0; a < plan.atoms().size(); ++a) {
    const BlockPattern pat = classify_atom(plan, layout, a);
    if (!pat.ok) {
      std::string desc = "atom (";
      for (std::size_t j = 0; j < 3; ++j) {
        const Point& p = plan.marginal_ref(j).point(plan.atoms()[a].idx[j]);
        for (int c = 0; c < d; ++c) desc += std::to_string(p[c]) + (c + 1 < d ? "," : "");
        desc += j < 2 ? "; " : ")";
      }
      throw BlockStructureViolation(desc + " has no L^k/C/R^k pattern");
    }
    tuples.push_back({plan.marginal_ref(pat.c_pos).point(plan.atoms()[a].idx[pat.c_pos]),
                      plan.marginal_ref(pat.r_pos).point(plan.atoms()[a].idx[pat.r_pos]),
                      plan.marginal_ref(pat.l_pos).point(plan.atoms()[a].idx[pat.l_pos])});
    masses.push_back(plan.atoms()[a].mass);
  }

  // Rebuild marginals as the projections of the permuted tuples.
  std::vector<DiscreteMeasure> out_marginals;
  std::vector<std::vector<std::size_t>> slot_index(3);
  for (std::size_t slot = 0; slot < 3; ++slot) {
    std::vector<Point> points;
    std::vector<double> weights;
    std::map<Point, std::size_t> index;
    slot_index[slot].resize(tuples.size());
    for (std::size_t a = 0; a < tuples.size(); ++a) {
      const Point& p = tuples[a][slot];
      auto [it, inserted] = index.try_emplace(p, points.size());
      if (inserted) {
        points.push_back(p);
        weights.push_back(masses[a]);
      } else {
        weights[it->second] += masses[a];
      }
      slot_index[slot][a] = it->second;
    }
    out_marginals.emplace_back(d, std::move(points), std::move(weights));
  }

  std::vector<PlanAtom> out_atoms(tuples.size());
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    out_atoms[a].idx = {slot_index[0][a], slot_index[1][a], slot_index[2][a]};
    out_atoms[a].mass = masses[a];
  }
  return SparsePlan(std::move(out_marginals), std::move(out_atoms));
}

}  // namespace mmot
