#include <cmath>
#include <numbers>

#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"
#include "saa/random.hpp"

namespace saa {

namespace {

void require_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 4.0)) throw InvalidInput("theta must lie in (0, pi/4)");
}

// Offset of the second data point along the first axis.
double shift(double theta) {
  return std::sin(theta) / (std::numbers::sqrt2 * std::sin(theta + std::numbers::pi / 4.0));
}

}  // namespace

RotatedLineFixture rotated_line_fixture(double theta) {
  require_theta(theta);
  const double s = std::sqrt(1.0 - std::cos(theta));
  const double phi = std::numbers::pi / 4.0 - theta / 2.0;
  const double a = shift(theta);
  const double top = (1.0 - a) * std::tan(theta + std::numbers::pi / 4.0);

  RotatedLineFixture f;
  f.X0 = DenseMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
  f.H0 = DenseMatrix::identity(2);
  f.Z_theta = DenseMatrix::from_rows({{s * std::cos(phi), s * std::sin(phi)}, {-a, 0.0}, {0.0, 0.0}});
  f.X_theta = DenseMatrix::from_rows({{s * std::cos(phi), 1.0 + s * std::sin(phi)}, {1.0 - a, 0.0}, {0.5, 0.5}});
  f.H_theta = DenseMatrix::from_rows({{0.0, top}, {1.0 - a, 0.0}});

  if (frobenius_distance(f.X_theta, f.X0 + f.Z_theta) > 1e-12) {
    throw NumericalError("rotated_line_fixture: X_theta differs from X0 + Z_theta");
  }
  return f;
}

double rotated_line_strong_lower_bound(double theta) {
  require_theta(theta);
  const double top = (1.0 - shift(theta)) * std::tan(theta + std::numbers::pi / 4.0);
  return (top - 1.0) * (top - 1.0);
}

ToyTriangleFixture toy_triangle_fixture(std::uint64_t seed, std::size_t points) {
  ToyTriangleFixture f;
  f.H0 = DenseMatrix::from_rows({{0.15, 0.15}, {0.1, 0.7}, {0.7, 0.1}});
  f.H1 = DenseMatrix::from_rows({{0.05, 0.05}, {1.0, 0.1}, {0.1, 1.0}});
  f.H2 = DenseMatrix::from_rows({{0.0, 0.0}, {0.0, 0.8}, {0.8, 0.0}});
  Rng rng(seed);
  f.W0 = random_row_stochastic(points, 3, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> e(3, 0.0);
    e[i] = 1.0;
    f.W0 = f.W0.with_row_appended(e);
  }
  f.X0 = matmul(f.W0, f.H0);
  return f;
}

}  // namespace saa
