#include "saa/random.hpp"

#include "saa/error.hpp"

namespace saa {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

DenseMatrix random_uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DenseMatrix out(rows, cols);
  for (double& v : out.values()) v = dist(rng);
  return out;
}

DenseMatrix random_normal(std::size_t rows, std::size_t cols, Rng& rng, double sigma) {
  DenseMatrix out(rows, cols);
  if (sigma == 0.0) return out;
  std::normal_distribution<double> dist(0.0, sigma);
  for (double& v : out.values()) v = dist(rng);
  return out;
}

DenseMatrix random_row_stochastic(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols == 0) throw InvalidInput("row-stochastic matrix needs at least one column");
  DenseMatrix out = random_uniform(rows, cols, rng);
  for (std::size_t i = 0; i < rows; ++i) {
    auto r = out.row(i);
    double s = 0.0;
    for (double v : r) s += v;
    if (s <= 0.0) {
      for (double& v : r) v = 1.0 / static_cast<double>(cols);
    } else {
      for (double& v : r) v /= s;
    }
  }
  return out;
}

DenseMatrix uniform_row_stochastic(std::size_t rows, std::size_t cols) {
  if (cols == 0) throw InvalidInput("row-stochastic matrix needs at least one column");
  return DenseMatrix(rows, cols, 1.0 / static_cast<double>(cols));
}

}  // namespace saa
