#include "mmot/cost.hpp"

#include <cstdlib>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

double eval_cost(const CostSpec& spec, std::span<const double> tuple) {
  const int n = spec.num_marginals;
  const int d = spec.dim;
  if (n < 2 || d < 1) throw InvalidInput("cost spec requires N >= 2, d >= 1");
  if (tuple.size() != static_cast<std::size_t>(n) * d)
    throw InvalidInput("tuple size does not match cost spec");

  switch (spec.kind) {
    case CostKind::SumSquare: {
      double value = 0.0;
      for (int a = 0; a < d; ++a) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += tuple[static_cast<std::size_t>(i) * d + a];
        value += s * s;
      }
      return value;
    }
    case CostKind::Attractive:
    case CostKind::Repulsive: {
      double value = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          double dist2 = 0.0;
          for (int a = 0; a < d; ++a) {
            const double diff = tuple[static_cast<std::size_t>(i) * d + a] -
                                tuple[static_cast<std::size_t>(j) * d + a];
            dist2 += diff * diff;
          }
          value += dist2;
        }
      }
      return spec.kind == CostKind::Attractive ? value : -value;
    }
  }
  throw InvalidInput("unknown cost kind");
}

std::size_t CostTensor::flat_index(std::span<const std::size_t> idx) const {
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape.size(); ++j) flat = flat * shape[j] + idx[j];
  return flat;
}

void CostTensor::unflatten(std::size_t flat, std::vector<std::size_t>& idx) const {
  idx.resize(shape.size());
  for (std::size_t j = shape.size(); j-- > 0;) {
    idx[j] = flat % shape[j];
    flat /= shape[j];
  }
}

std::size_t tensor_cap() {
  if (const char* env = std::getenv("MMOT_TENSOR_CAP")) {
    const long long cap = std::atoll(env);
    if (cap > 0) return static_cast<std::size_t>(cap);
  }
  return 10'000'000;
}

CostTensor cost_tensor(const CostSpec& spec, const std::vector<DiscreteMeasure>& measures) {
  if (measures.size() != static_cast<std::size_t>(spec.num_marginals))
    throw InvalidInput("marginal count does not match cost spec");
  const int d = spec.dim;
  for (const auto& mu : measures)
    if (mu.dim() != d) throw InvalidInput("measure dimension does not match cost spec");

  const std::size_t cap = tensor_cap();
  std::size_t total = 1;
  CostTensor tensor;
  for (const auto& mu : measures) {
    tensor.shape.push_back(mu.size());
    if (total > cap / mu.size())
      throw TensorTooLarge("cost tensor exceeds cap of " + std::to_string(cap) + " entries");
    total *= mu.size();
  }

  tensor.values.resize(total);
  const int n = spec.num_marginals;
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> tuple(static_cast<std::size_t>(n) * d);
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (int j = 0; j < n; ++j) {
      const Point& p = measures[static_cast<std::size_t>(j)].point(idx[static_cast<std::size_t>(j)]);
      for (int a = 0; a < d; ++a) tuple[static_cast<std::size_t>(j) * d + a] = p[a];
    }
    tensor.values[flat] = eval_cost(spec, tuple);
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[static_cast<std::size_t>(j)] < tensor.shape[static_cast<std::size_t>(j)]) break;
      idx[static_cast<std::size_t>(j)] = 0;
    }
  }
  return tensor;
}

double decompose_constant(const std::vector<DiscreteMeasure>& measures) {
  double sum = 0.0;
  for (const auto& mu : measures) sum += moments(mu).second_moment;
  return static_cast<double>(measures.size()) * sum;
}

}  // namespace mmot
