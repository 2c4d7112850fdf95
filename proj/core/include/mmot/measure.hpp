#pragma once

#include <array>
#include <vector>

namespace mmot {

using Point = std::vector<double>;

// Weighted point cloud representing a probability measure on R^d.
// Construction merges bitwise-identical atoms and checks that the weights
// are nonnegative and sum to 1 within 1e-12. Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure(int dim, std::vector<Point> points, std::vector<double> weights);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  const Point& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Index of a bitwise-equal atom, or -1.
  long find_atom(const Point& p) const;

  // True iff atom sets and weights are bitwise identical.
  bool same_atoms(const DiscreteMeasure& other) const;

  // True iff the atom set is invariant under x -> -x with matching weights.
  bool symmetric_under_negation() const;

 private:
  int dim_;
  std::vector<Point> points_;
  std::vector<double> weights_;
};

// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d].
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
};

// The interval blocks C, L^k, R^k of the counterexample support, raised to
// d-dimensional products. C = [0,1/2]^d, R^k = [3^k,3^k+1/2]^d,
// L^k = [-3^k-1,-3^k]^d for k in {1,2}.
struct BlockLayout {
  int d = 1;

  static Box center(int d);
  static Box right(int d, int k);
  static Box left(int d, int k);

  enum class Block { C, L1, L2, R1, R2, Outside };

  // Classifies a point; a point is in a block iff every coordinate lies in
  // the corresponding interval.
  Block classify(const Point& p) const;
};

// n^d atoms at the cell midpoints of the uniform grid over `box`, equal
// weights summing to 1.
DiscreteMeasure discretize_uniform_box(const Box& box, int n);

struct CounterexampleParts {
  DiscreteMeasure mu_c;
  DiscreteMeasure mu_r;
  DiscreteMeasure mu_l;
};

// Aligned discretizations of the three parts of the counterexample measure.
// mu_c uses the midpoint grid on [0,1/2]^d with n atoms per axis; the R
// atoms are exactly the images x + 3^k*1 of the C atoms, and the L atoms are
// exactly -(x + (x + 3^k*1)) so that every H_k triple sums to zero.
CounterexampleParts build_counterexample_parts(int d, int n);

// mu = (mu_L + mu_C + mu_R) / 3 on the union of the three supports.
DiscreteMeasure build_counterexample_measure(int d, int n);

struct Moments {
  Point mean;
  double second_moment = 0.0;  // sum_i w_i |x_i|^2
};

Moments moments(const DiscreteMeasure& mu);

}  // namespace mmot
