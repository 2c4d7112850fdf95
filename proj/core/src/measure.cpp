#include "mmot/measure.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "mmot/errors.hpp"

namespace mmot {

DiscreteMeasure::DiscreteMeasure(int dim, std::vector<Point> points,
                                 std::vector<double> weights)
    : dim_(dim) {
  if (dim < 1) throw InvalidInput("measure dimension must be positive");
  if (points.size() != weights.size())
    throw InvalidInput("points/weights length mismatch");
  if (points.empty()) throw InvalidInput("measure must have at least one atom");

  // Merge bitwise-identical atoms, keeping first-occurrence order;
  // coordinate comparison is exact.
  std::map<Point, std::size_t> seen;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (static_cast<int>(points[i].size()) != dim)
      throw InvalidInput("point has wrong dimension");
    if (!(weights[i] >= 0.0))
      throw InvalidInput("weights must be nonnegative");
    total += weights[i];
    auto [it, inserted] = seen.try_emplace(points[i], points_.size());
    if (inserted) {
      points_.push_back(points[i]);
      weights_.push_back(weights[i]);
    } else {
      weights_[it->second] += weights[i];
    }
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidInput("weights sum to " + std::to_string(total) + ", expected 1");
}

long DiscreteMeasure::find_atom(const Point& p) const {
  for (std::size_t i = 0; i < points_.size(); ++i)
    if (points_[i] == p) return static_cast<long>(i);
  return -1;
}

bool DiscreteMeasure::same_atoms(const DiscreteMeasure& other) const {
  return dim_ == other.dim_ && points_ == other.points_ && weights_ == other.weights_;
}

bool DiscreteMeasure::symmetric_under_negation() const {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    Point neg(points_[i]);
    for (double& c : neg) c = -c;
    long j = find_atom(neg);
    if (j < 0 || weights_[static_cast<std::size_t>(j)] != weights_[i]) return false;
  }
  return true;
}

Box BlockLayout::center(int d) {
  return {Point(d, 0.0), Point(d, 0.5)};
}

Box BlockLayout::right(int d, int k) {
  const double lo = std::pow(3.0, k);
  return {Point(d, lo), Point(d, lo + 0.5)};
}

Box BlockLayout::left(int d, int k) {
  const double hi = -std::pow(3.0, k);
  return {Point(d, hi - 1.0), Point(d, hi)};
}

namespace {

bool in_box(const Box& box, const Point& p) {
  for (std::size_t a = 0; a < p.size(); ++a)
    if (p[a] < box.lo[a] || p[a] > box.hi[a]) return false;
  return true;
}

}  // namespace

BlockLayout::Block BlockLayout::classify(const Point& p) const {
  if (in_box(center(d), p)) return Block::C;
  if (in_box(left(d, 1), p)) return Block::L1;
  if (in_box(left(d, 2), p)) return Block::L2;
  if (in_box(right(d, 1), p)) return Block::R1;
  if (in_box(right(d, 2), p)) return Block::R2;
  return Block::Outside;
}

DiscreteMeasure discretize_uniform_box(const Box& box, int n) {
  if (n < 1) throw InvalidDomain("atoms per axis must be >= 1");
  const int d = static_cast<int>(box.lo.size());
  if (d < 1 || box.hi.size() != box.lo.size())
    throw InvalidDomain("malformed box");
  for (int a = 0; a < d; ++a)
    if (!(box.hi[a] > box.lo[a])) throw InvalidDomain("zero-volume box");

  std::size_t count = 1;
  for (int a = 0; a < d; ++a) count *= static_cast<std::size_t>(n);

  std::vector<Point> points;
  points.reserve(count);
  std::vector<int> digits(d, 0);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(d);
    for (int a = 0; a < d; ++a) {
      const double h = (box.hi[a] - box.lo[a]) / n;
      p[a] = box.lo[a] + (digits[a] + 0.5) * h;
    }
    points.push_back(std::move(p));
    for (int a = d - 1; a >= 0; --a) {
      if (++digits[a] < n) break;
      digits[a] = 0;
    }
  }
  return DiscreteMeasure(d, std::move(points), std::vector<double>(count, 1.0 / count));
}

namespace {

// Midpoints (2i+1)/(4n) of the n-cell grid on [0, 1/2], one axis.
std::vector<double> c_axis_grid(int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = (2.0 * i + 1.0) / (4.0 * n);
  return xs;
}

std::vector<Point> product_grid(const std::vector<double>& axis, int d) {
  std::vector<Point> out;
  std::size_t count = 1;
  for (int a = 0; a < d; ++a) count *= axis.size();
  out.reserve(count);
  std::vector<std::size_t> digits(d, 0);
  for (std::size_t i = 0; i < count; ++i) {
    Point p(d);
    for (int a = 0; a < d; ++a) p[a] = axis[digits[a]];
    out.push_back(std::move(p));
    for (int a = d - 1; a >= 0; --a) {
      if (++digits[a] < axis.size()) break;
      digits[a] = 0;
    }
  }
  return out;
}

}  // namespace

CounterexampleParts build_counterexample_parts(int d, int n) {
  if (n < 1) throw InvalidDomain("atoms per axis must be >= 1");
  if (d < 1) throw InvalidDomain("dimension must be >= 1");

  const std::vector<double> cx = c_axis_grid(n);
  std::vector<Point> c_points = product_grid(cx, d);
  const std::size_t nc = c_points.size();

  std::vector<Point> r_points, l_points;
  r_points.reserve(2 * nc);
  l_points.reserve(2 * nc);
  for (int k = 1; k <= 2; ++k) {
    const double shift = std::pow(3.0, k);
    std::vector<double> rx(cx.size()), lx(cx.size());
    for (std::size_t i = 0; i < cx.size(); ++i) {
      rx[i] = cx[i] + shift;
      // -(x + (x + 3^k)): the H_k triple (x, r, l) then sums to zero in
      // floating point, not just in exact arithmetic.
      lx[i] = -(cx[i] + rx[i]);
    }
    for (auto& p : product_grid(rx, d)) r_points.push_back(std::move(p));
    for (auto& p : product_grid(lx, d)) l_points.push_back(std::move(p));
  }

  const double wc = 1.0 / static_cast<double>(nc);
  const double ws = 0.5 / static_cast<double>(nc);
  return CounterexampleParts{
      DiscreteMeasure(d, std::move(c_points), std::vector<double>(nc, wc)),
      DiscreteMeasure(d, std::move(r_points), std::vector<double>(2 * nc, ws)),
      DiscreteMeasure(d, std::move(l_points), std::vector<double>(2 * nc, ws))};
}

DiscreteMeasure build_counterexample_measure(int d, int n) {
  CounterexampleParts parts = build_counterexample_parts(d, n);
  std::vector<Point> points;
  std::vector<double> weights;
  for (const DiscreteMeasure* part : {&parts.mu_c, &parts.mu_r, &parts.mu_l}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      points.push_back(part->point(i));
      weights.push_back(part->weight(i) / 3.0);
    }
  }
  return DiscreteMeasure(d, std::move(points), std::move(weights));
}

Moments moments(const DiscreteMeasure& mu) {
  Moments m;
  m.mean.assign(mu.dim(), 0.0);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Point& p = mu.point(i);
    const double w = mu.weight(i);
    for (int a = 0; a < mu.dim(); ++a) {
      m.mean[a] += w * p[a];
      m.second_moment += w * p[a] * p[a];
    }
  }
  return m;
}

}  // namespace mmot
