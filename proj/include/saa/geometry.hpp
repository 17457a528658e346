#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "saa/matrix.hpp"

namespace saa {

struct HullOptions {
  double tol = 1e-10;
  std::size_t max_iter = 5000;
};

// Values below this are treated as an exact zero hull distance in fixtures.
inline constexpr double kHullZeroTol = 1e-8;

struct HullDistanceResult {
  double sq_distance = 0.0;
  std::vector<double> weights;  // on the unit simplex
  std::size_t iterations = 0;
};

/// Squared Euclidean distance from points to the convex hull of the rows of a
/// fixed matrix. Caches the Gram matrix and step size so that many queries
/// against the same hull are cheap.
class ConvexHull {
 public:
  explicit ConvexHull(const DenseMatrix& vertices);

  HullDistanceResult distance(std::span<const double> x, const HullOptions& opts = {}) const;

  const DenseMatrix& vertices() const { return vertices_; }

 private:
  DenseMatrix vertices_;
  DenseMatrix gram_;  // V V^T
  double lipschitz_ = 0.0;
};

HullDistanceResult hull_distance(std::span<const double> x, const DenseMatrix& hull, const HullOptions& opts = {});

struct SetHullDistance {
  std::vector<double> row_sq;  // D(X_i, Y) per row
  double total = 0.0;          // D(X, Y)
  double sqrt_total = 0.0;     // D(X, Y)^{1/2}
  double max_row = 0.0;        // max_i D(X_i, Y)^{1/2}
  double l1 = 0.0;             // sum_i D(X_i, Y)^{1/2}
};

SetHullDistance set_hull_distance_detail(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts = {});

// D(X, Y) = sum over rows of X of the squared distance to Conv(Y).
double set_hull_distance(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts = {});

// sum over rows of X of the (unsquared) distance to Conv(Y).
double set_hull_distance_l1(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts = {});

struct ArchetypeDistance {
  double value = 0.0;
  std::vector<std::size_t> nearest;  // nearest row of H2 for each row of H1
};

/// sum_i min_j ||H1_i - H2_j||^2 by enumeration of all row pairs.
/// Not symmetric in its arguments.
ArchetypeDistance archetype_distance(const DenseMatrix& h1, const DenseMatrix& h2);

// sum_i min_j ||H1_i - H2_j||
double archetype_distance_l1(const DenseMatrix& h1, const DenseMatrix& h2);

// max_{i,j} ||H_i - H_j||
double archetype_spread(const DenseMatrix& h);

}  // namespace saa
