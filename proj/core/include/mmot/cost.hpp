#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmot/measure.hpp"

namespace mmot {

enum class CostKind { Attractive, Repulsive, SumSquare };

// Harmonic cost family selector for N marginals in dimension d.
//   Attractive:  sum_{i<j} |x_i - x_j|^2
//   Repulsive:  -sum_{i<j} |x_i - x_j|^2
//   SumSquare:   |x_1 + ... + x_N|^2
struct CostSpec {
  CostKind kind = CostKind::Repulsive;
  int num_marginals = 2;
  int dim = 1;
};

// `tuple` is the flattened N x d coordinate block (x_1, ..., x_N).
double eval_cost(const CostSpec& spec, std::span<const double> tuple);

// Dense row-major N-way tensor over the atom grids of N measures.
struct CostTensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t flat_index(std::span<const std::size_t> idx) const;
  void unflatten(std::size_t flat, std::vector<std::size_t>& idx) const;
};

// Total entry count cap; MMOT_TENSOR_CAP overrides the 10^7 default.
std::size_t tensor_cap();

CostTensor cost_tensor(const CostSpec& spec, const std::vector<DiscreteMeasure>& measures);

// The plan-independent offset N * sum_j M2(mu_j) with
// cost_repulsive(gamma) = cost_sumsquare(gamma) - offset for every coupling
// gamma of these marginals.
double decompose_constant(const std::vector<DiscreteMeasure>& measures);

}  // namespace mmot
