#include "saa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "saa/apg.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"

namespace saa {

namespace {

void require_cols(const DenseMatrix& a, const DenseMatrix& b, const char* what) {
  if (a.cols() != b.cols()) {
    throw InvalidInput(std::string(what) + ": column counts differ (" + std::to_string(a.cols()) + " vs " +
                       std::to_string(b.cols()) + ")");
  }
}

}  // namespace

ConvexHull::ConvexHull(const DenseMatrix& vertices) : vertices_(vertices) {
  if (vertices_.rows() == 0) throw InvalidInput("convex hull of an empty point set");
  gram_ = matmul_nt(vertices_, vertices_);
  const double sigma = vertices_.cols() > 0 ? spectral_norm(vertices_) : 0.0;
  lipschitz_ = 2.0 * sigma * sigma;
}

HullDistanceResult ConvexHull::distance(std::span<const double> x, const HullOptions& opts) const {
  if (x.size() != vertices_.cols()) {
    throw InvalidInput("hull_distance: point has " + std::to_string(x.size()) + " coordinates, hull has " +
                       std::to_string(vertices_.cols()));
  }
  const std::size_t r = vertices_.rows();
  std::vector<double> c(r);
  for (std::size_t i = 0; i < r; ++i) c[i] = dot(vertices_.row(i), x);
  const double xx = dot(x, x);

  // f(a) = a^T G a - 2 c^T a + x^T x, evaluated in Gram form during the solve.
  auto value = [&](const DenseMatrix& a) {
    const auto av = a.row(0);
    double quad = 0.0;
    for (std::size_t i = 0; i < r; ++i) quad += av[i] * dot(gram_.row(i), av);
    return std::max(quad - 2.0 * dot(c, av) + xx, 0.0);
  };
  auto gradient = [&](const DenseMatrix& a) {
    const auto av = a.row(0);
    DenseMatrix g(1, r);
    for (std::size_t i = 0; i < r; ++i) g(0, i) = 2.0 * (dot(gram_.row(i), av) - c[i]);
    return g;
  };
  auto project = [](DenseMatrix& a) { project_simplex(a.row(0)); };

  // Start at the nearest vertex.
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r; ++i) {
    const double d = squared_distance(vertices_.row(i), x);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  DenseMatrix a0(1, r);
  a0(0, best) = 1.0;

  ApgOptions apg{opts.tol, opts.max_iter, 1e-24 * (1.0 + xx)};
  ApgOutcome sol = minimize_apg(std::move(a0), lipschitz_, value, gradient, project, apg);

  HullDistanceResult res;
  res.weights.assign(sol.x.row(0).begin(), sol.x.row(0).end());
  res.iterations = sol.iterations;
  // Report the distance in direct form, not the cancellation-prone Gram form.
  std::vector<double> v(vertices_.cols(), 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    const double w = res.weights[i];
    if (w == 0.0) continue;
    const auto row = vertices_.row(i);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += w * row[j];
  }
  res.sq_distance = squared_distance(x, v);
  return res;
}

HullDistanceResult hull_distance(std::span<const double> x, const DenseMatrix& hull, const HullOptions& opts) {
  return ConvexHull(hull).distance(x, opts);
}

SetHullDistance set_hull_distance_detail(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts) {
  require_cols(x, y, "set_hull_distance");
  const ConvexHull hull(y);
  SetHullDistance out;
  out.row_sq.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out.row_sq[i] = hull.distance(x.row(i), opts).sq_distance;
  // Fixed index order for reproducible sums.
  for (double d : out.row_sq) {
    out.total += d;
    out.l1 += std::sqrt(d);
    out.max_row = std::max(out.max_row, std::sqrt(d));
  }
  out.sqrt_total = std::sqrt(out.total);
  return out;
}

double set_hull_distance(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts) {
  return set_hull_distance_detail(x, y, opts).total;
}

double set_hull_distance_l1(const DenseMatrix& x, const DenseMatrix& y, const HullOptions& opts) {
  return set_hull_distance_detail(x, y, opts).l1;
}

ArchetypeDistance archetype_distance(const DenseMatrix& h1, const DenseMatrix& h2) {
  require_cols(h1, h2, "archetype_distance");
  if (h2.rows() == 0 && h1.rows() > 0) throw InvalidInput("archetype_distance: second argument has no rows");
  ArchetypeDistance out;
  out.nearest.resize(h1.rows());
  for (std::size_t i = 0; i < h1.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < h2.rows(); ++j) {
      const double d = squared_distance(h1.row(i), h2.row(j));
      if (d < best) {
        best = d;
        out.nearest[i] = j;
      }
    }
    out.value += best;
  }
  return out;
}

double archetype_distance_l1(const DenseMatrix& h1, const DenseMatrix& h2) {
  const ArchetypeDistance nearest = archetype_distance(h1, h2);
  double total = 0.0;
  for (std::size_t i = 0; i < h1.rows(); ++i) {
    total += std::sqrt(squared_distance(h1.row(i), h2.row(nearest.nearest[i])));
  }
  return total;
}

double archetype_spread(const DenseMatrix& h) {
  double best = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = i + 1; j < h.rows(); ++j) best = std::max(best, squared_distance(h.row(i), h.row(j)));
  }
  return std::sqrt(best);
}

}  // namespace saa
