#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mmot/errors.hpp"
#include "mmot/solver.hpp"

namespace mmot {

namespace {

constexpr double kPivotTol = 1e-10;
constexpr double kReducedCostTol = 1e-9;

// Dense revised simplex on the multi-marginal transportation polytope.
//
// Columns are the flattened tensor indices; column t carries a single 1 in
// one row per marginal block. The last row of every block except the first
// is dropped (those constraints are redundant), so the constraint matrix has
// full row rank. Pivoting uses Dantzig pricing with smallest-index
// tie-breaks and falls back to Bland's rule after a degenerate streak, which
// keeps the path deterministic and cycle-free.
class TransportSimplex {
 public:
  TransportSimplex(const std::vector<DiscreteMeasure>& measures,
                   const std::vector<double>& cost)
      : cost_(cost) {
    const std::size_t n = measures.size();
    shape_.resize(n);
    num_cols_ = 1;
    for (std::size_t j = 0; j < n; ++j) {
      shape_[j] = measures[j].size();
      num_cols_ *= shape_[j];
    }
    if (cost_.size() != num_cols_) throw InvalidInput("cost vector size mismatch");

    row_of_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t keep = j == 0 ? shape_[j] : shape_[j] - 1;
      row_of_[j].assign(shape_[j], SIZE_MAX);
      for (std::size_t i = 0; i < keep; ++i) row_of_[j][i] = rhs_.size() + i;
      for (std::size_t i = 0; i < keep; ++i) rhs_.push_back(measures[j].weight(i));
    }
    num_rows_ = rhs_.size();

    strides_.assign(n, 1);
    for (std::size_t j = n; j-- > 1;) strides_[j - 1] = strides_[j] * shape_[j];
  }

  // Rows hit by column t (one per marginal, minus dropped rows).
  void column_rows(std::size_t t, std::vector<std::size_t>& rows) const {
    rows.clear();
    for (std::size_t j = 0; j < shape_.size(); ++j) {
      const std::size_t i = (t / strides_[j]) % shape_[j];
      const std::size_t r = row_of_[j][i];
      if (r != SIZE_MAX) rows.push_back(r);
    }
  }

  struct Solution {
    std::vector<std::size_t> support;
    std::vector<double> masses;
    double value = 0.0;
    double duality_gap = 0.0;
    std::size_t iterations = 0;
  };

  Solution solve() {
    basis_.resize(num_rows_);
    x_basic_ = rhs_;
    binv_.assign(num_rows_, std::vector<double>(num_rows_, 0.0));
    for (std::size_t r = 0; r < num_rows_; ++r) {
      basis_[r] = num_cols_ + r;  // artificial
      binv_[r][r] = 1.0;
    }

    phase_one_ = true;
    run();
    double infeas = 0.0;
    for (std::size_t r = 0; r < num_rows_; ++r)
      if (basis_[r] >= num_cols_) infeas += x_basic_[r];
    if (infeas > 1e-8)
      throw SolverFailure("phase 1 ended infeasible, residual " + std::to_string(infeas));
    drive_out_artificials();

    phase_one_ = false;
    run();

    Solution sol;
    sol.iterations = iterations_;
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (basis_[r] < num_cols_ && x_basic_[r] > kPivotTol) {
        sol.support.push_back(basis_[r]);
        sol.masses.push_back(x_basic_[r]);
        sol.value += cost_[basis_[r]] * x_basic_[r];
      }
    }
    const std::vector<double> duals = compute_duals();
    double dual_value = 0.0;
    for (std::size_t r = 0; r < num_rows_; ++r) dual_value += duals[r] * rhs_[r];
    sol.duality_gap = std::abs(sol.value - dual_value);
    return sol;
  }

 private:
  double column_cost(std::size_t col) const {
    if (phase_one_) return col >= num_cols_ ? 1.0 : 0.0;
    return col >= num_cols_ ? 0.0 : cost_[col];
  }

  std::vector<double> compute_duals() const {
    std::vector<double> duals(num_rows_, 0.0);
    for (std::size_t r = 0; r < num_rows_; ++r) {
      const double cb = column_cost(basis_[r]);
      if (cb == 0.0) continue;
      for (std::size_t c = 0; c < num_rows_; ++c) duals[c] += cb * binv_[r][c];
    }
    return duals;
  }

  double reduced_cost(std::size_t t, const std::vector<double>& duals,
                      std::vector<std::size_t>& rows) const {
    column_rows(t, rows);
    double rc = column_cost(t);
    for (std::size_t r : rows) rc -= duals[r];
    return rc;
  }

  void run() {
    std::size_t degenerate_streak = 0;
    std::vector<std::size_t> rows;
    while (true) {
      const std::vector<double> duals = compute_duals();

      // Pricing: Dantzig normally, Bland once degeneracy stalls.
      const bool bland = degenerate_streak > 64;
      std::size_t entering = SIZE_MAX;
      double best_rc = -kReducedCostTol;
      for (std::size_t t = 0; t < num_cols_; ++t) {
        const double rc = reduced_cost(t, duals, rows);
        if (rc < best_rc) {
          best_rc = rc;
          entering = t;
          if (bland) break;
        }
      }
      if (entering == SIZE_MAX) return;  // optimal

      // Direction d = B^-1 A_e.
      column_rows(entering, rows);
      std::vector<double> dir(num_rows_, 0.0);
      for (std::size_t r = 0; r < num_rows_; ++r)
        for (std::size_t c : rows) dir[r] += binv_[r][c];

      // Ratio test; ties broken toward the smallest basis column id.
      std::size_t leaving = SIZE_MAX;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < num_rows_; ++r) {
        if (dir[r] > kPivotTol) {
          const double ratio = x_basic_[r] / dir[r];
          if (ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol &&
               (leaving == SIZE_MAX || basis_[r] < basis_[leaving]))) {
            best_ratio = ratio;
            leaving = r;
          }
        }
      }
      if (leaving == SIZE_MAX)
        throw SolverFailure("unbounded direction in transportation simplex");

      degenerate_streak = best_ratio <= kPivotTol ? degenerate_streak + 1 : 0;
      pivot(entering, leaving, dir);
      if (++iterations_ % 64 == 0) refactorize();
      if (iterations_ > 200'000 + 50 * num_cols_)
        throw SolverFailure("simplex iteration limit exceeded");
    }
  }

  void pivot(std::size_t entering, std::size_t leaving, const std::vector<double>& dir) {
    const double piv = dir[leaving];
    for (std::size_t c = 0; c < num_rows_; ++c) binv_[leaving][c] /= piv;
    const double xl = x_basic_[leaving] / piv;
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (r == leaving) continue;
      const double f = dir[r];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < num_rows_; ++c) binv_[r][c] -= f * binv_[leaving][c];
      x_basic_[r] -= f * xl;
      if (x_basic_[r] < 0.0 && x_basic_[r] > -1e-12) x_basic_[r] = 0.0;
    }
    x_basic_[leaving] = xl;
    basis_[leaving] = entering;
  }

  // Rebuild B^-1 from the basis by Gauss-Jordan elimination, then recompute
  // the basic solution. Bounds the drift of the product-form updates.
  void refactorize() {
    std::vector<std::vector<double>> aug(num_rows_, std::vector<double>(2 * num_rows_, 0.0));
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (basis_[r] >= num_cols_) {
        aug[basis_[r] - num_cols_][r] = 1.0;
      } else {
        column_rows(basis_[r], rows);
        for (std::size_t rr : rows) aug[rr][r] = 1.0;
      }
      aug[r][num_rows_ + r] = 1.0;
    }
    for (std::size_t col = 0; col < num_rows_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < num_rows_; ++r)
        if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
      if (std::abs(aug[piv][col]) < 1e-12)
        throw SolverFailure("numerically singular basis");
      std::swap(aug[col], aug[piv]);
      const double d = aug[col][col];
      for (double& v : aug[col]) v /= d;
      for (std::size_t r = 0; r < num_rows_; ++r) {
        if (r == col) continue;
        const double f = aug[r][col];
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < 2 * num_rows_; ++c) aug[r][c] -= f * aug[col][c];
      }
    }
    for (std::size_t r = 0; r < num_rows_; ++r)
      for (std::size_t c = 0; c < num_rows_; ++c) binv_[r][c] = aug[r][num_rows_ + c];
    for (std::size_t r = 0; r < num_rows_; ++r) {
      double v = 0.0;
      for (std::size_t c = 0; c < num_rows_; ++c) v += binv_[r][c] * rhs_[c];
      x_basic_[r] = v < 0.0 && v > -1e-12 ? 0.0 : v;
    }
  }

  // After phase 1, swap zero-level artificials for any real column with a
  // nonzero pivot element in their row.
  void drive_out_artificials() {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < num_rows_; ++r) {
      if (basis_[r] < num_cols_) continue;
      for (std::size_t t = 0; t < num_cols_; ++t) {
        if (std::find(basis_.begin(), basis_.end(), t) != basis_.end()) continue;
        column_rows(t, rows);
        double piv = 0.0;
        for (std::size_t c : rows) piv += binv_[r][c];
        if (std::abs(piv) > 1e-7) {
          std::vector<double> dir(num_rows_, 0.0);
          for (std::size_t rr = 0; rr < num_rows_; ++rr)
            for (std::size_t c : rows) dir[rr] += binv_[rr][c];
          pivot(t, r, dir);
          break;
        }
      }
    }
    refactorize();
  }

  std::vector<double> cost_;
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;
  std::vector<std::vector<std::size_t>> row_of_;
  std::vector<double> rhs_;
  std::size_t num_rows_ = 0;
  std::size_t num_cols_ = 0;

  std::vector<std::size_t> basis_;
  std::vector<double> x_basic_;
  std::vector<std::vector<double>> binv_;
  bool phase_one_ = true;
  std::size_t iterations_ = 0;
};

SparsePlan plan_from_solution(const std::vector<DiscreteMeasure>& measures,
                              const TransportSimplex::Solution& sol) {
  const std::size_t n = measures.size();
  std::vector<std::size_t> strides(n, 1);
  for (std::size_t j = n; j-- > 1;) strides[j - 1] = strides[j] * measures[j].size();

  std::vector<PlanAtom> atoms;
  double total = 0.0;
  for (double m : sol.masses) total += m;
  for (std::size_t a = 0; a < sol.support.size(); ++a) {
    PlanAtom atom;
    atom.idx.resize(n);
    for (std::size_t j = 0; j < n; ++j)
      atom.idx[j] = (sol.support[a] / strides[j]) % measures[j].size();
    atom.mass = sol.masses[a] / total;  // squeeze out simplex roundoff
    atoms.push_back(std::move(atom));
  }
  return SparsePlan(measures, std::move(atoms));
}

}  // namespace

SolveReport solve_lp_custom(const std::vector<DiscreteMeasure>& measures,
                            const std::vector<double>& cost) {
  const auto start = std::chrono::steady_clock::now();
  TransportSimplex simplex(measures, cost);
  const TransportSimplex::Solution sol = simplex.solve();

  SolveReport report;
  report.method = "lp_exact";
  report.value = sol.value;
  report.iterations = sol.iterations;
  report.residuals.duality_gap = sol.duality_gap;
  report.plan = plan_from_solution(measures, sol);

  double violation = 0.0;
  for (std::size_t j = 0; j < measures.size(); ++j) {
    std::vector<double> proj(measures[j].size(), 0.0);
    for (const auto& atom : report.plan->atoms()) proj[atom.idx[j]] += atom.mass;
    for (std::size_t i = 0; i < proj.size(); ++i)
      violation = std::max(violation, std::abs(proj[i] - measures[j].weight(i)));
  }
  report.residuals.marginal_violation = violation;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport solve_lp(const std::vector<DiscreteMeasure>& measures, const CostSpec& spec) {
  const CostTensor tensor = cost_tensor(spec, measures);
  return solve_lp_custom(measures, tensor.values);
}

SparsePlan random_vertex_plan(const std::vector<DiscreteMeasure>& measures,
                              std::uint64_t seed) {
  std::size_t total = 1;
  for (const auto& mu : measures) total *= mu.size();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> cost(total);
  for (double& c : cost) c = unif(rng);
  return *solve_lp_custom(measures, cost).plan;
}

}  // namespace mmot
