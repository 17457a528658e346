#include "saa/projections.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "saa/error.hpp"

namespace saa {

void project_simplex(std::span<double> v) {
  if (v.empty()) throw InvalidInput("simplex projection of an empty row");
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.begin(), u.end(), std::greater<>());

  // theta = (sum of the rho largest - 1) / rho, rho the last index where
  // u_rho - theta stays positive.
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumsum += u[i];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

DenseMatrix project_simplex_rows(const DenseMatrix& a) {
  if (a.cols() == 0 && a.rows() > 0) throw InvalidInput("simplex projection of an empty row");
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.rows(); ++i) project_simplex(out.row(i));
  return out;
}

SparseProjection project_sparse(const DenseMatrix& a, std::size_t ell) {
  const auto vals = a.values();
  SparseProjection result{DenseMatrix(a.rows(), a.cols()), SparsityPattern{{}, ell}};
  if (ell == 0 || vals.empty()) return result;

  std::vector<std::size_t> order;
  order.reserve(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] != 0.0) order.push_back(i);
  }
  // Strict total order: magnitude descending, then flat index ascending.
  auto before = [&](std::size_t x, std::size_t y) {
    const double ax = std::abs(vals[x]), ay = std::abs(vals[y]);
    if (ax != ay) return ax > ay;
    return x < y;
  };
  if (order.size() > ell) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(ell), order.end(), before);
    order.resize(ell);
  }
  std::sort(order.begin(), order.end());

  auto out = result.matrix.values();
  result.pattern.kept.reserve(order.size());
  for (std::size_t idx : order) {
    out[idx] = vals[idx];
    result.pattern.kept.push_back({idx / a.cols(), idx % a.cols()});
  }
  return result;
}

DenseMatrix sparse_complement(const DenseMatrix& a, std::size_t ell) {
  return a - project_sparse(a, ell).matrix;
}

DenseMatrix clamp_nonneg(const DenseMatrix& a) {
  DenseMatrix out = a;
  for (double& v : out.values()) v = std::max(v, 0.0);
  return out;
}

}  // namespace saa
