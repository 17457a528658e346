#include "saa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "saa/error.hpp"

namespace saa {

namespace {

std::string shape(const DenseMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

// y = G x for a square symmetric G.
void gram_apply(const DenseMatrix& g, const std::vector<double>& x, std::vector<double>& y) {
  const std::size_t p = g.rows();
  for (std::size_t i = 0; i < p; ++i) {
    const auto gi = g.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j) s += gi[j] * x[j];
    y[i] = s;
  }
}

double power_iterate(const DenseMatrix& g, std::vector<double> v, double tol, std::size_t max_iter) {
  const std::size_t p = g.rows();
  std::vector<double> w(p);
  double nv = norm2(v);
  for (double& x : v) x /= nv;
  double lambda = 0.0;
  for (std::size_t it = 0; it < max_iter; ++it) {
    gram_apply(g, v, w);
    const double next = dot(v, w);  // Rayleigh quotient
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (std::size_t i = 0; i < p; ++i) v[i] = w[i] / nw;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw InvalidInput("matmul: " + shape(a) + " * " + shape(b));
  const std::size_t m = a.rows(), inner = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    auto ci = c.row(i);
    const auto ai = a.row(i);
    for (std::size_t p = 0; p < inner; ++p) {
      const double aip = ai[p];
      if (aip == 0.0) continue;
      const auto bp = b.row(p);
      for (std::size_t j = 0; j < n; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw InvalidInput("matmul_tn: " + shape(a) + "^T * " + shape(b));
  const std::size_t m = a.cols(), n = b.cols();
  DenseMatrix c(m, n);
  for (std::size_t p = 0; p < a.rows(); ++p) {
    const auto ap = a.row(p);
    const auto bp = b.row(p);
    for (std::size_t i = 0; i < m; ++i) {
      const double api = ap[i];
      if (api == 0.0) continue;
      auto ci = c.row(i);
      for (std::size_t j = 0; j < n; ++j) ci[j] += api * bp[j];
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) throw InvalidInput("matmul_nt: " + shape(a) + " * " + shape(b) + "^T");
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto ai = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) c(i, j) = dot(ai, b.row(j));
  }
  return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("frobenius_inner: " + shape(a) + " vs " + shape(b));
  }
  return dot(a.values(), b.values());
}

double frobenius_sq(const DenseMatrix& a) { return dot(a.values(), a.values()); }

double frobenius_norm(const DenseMatrix& a) { return std::sqrt(frobenius_sq(a)); }

double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("frobenius_distance: " + shape(a) + " vs " + shape(b));
  }
  return std::sqrt(squared_distance(a.values(), b.values()));
}

std::vector<double> row_norms(const DenseMatrix& a) {
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = norm2(a.row(i));
  return out;
}

std::vector<double> row_sums(const DenseMatrix& a) {
  std::vector<double> out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (double v : a.row(i)) out[i] += v;
  }
  return out;
}

double spectral_norm(const DenseMatrix& a, double tol, std::size_t max_iter) {
  if (a.empty()) throw InvalidInput("spectral_norm: empty matrix");
  if (!(tol > 0.0)) throw InvalidInput("spectral_norm: tol must be positive");
  for (double v : a.values()) {
    if (!std::isfinite(v)) throw InvalidInput("spectral_norm: non-finite entry");
  }
  const DenseMatrix g = a.cols() <= a.rows() ? matmul_tn(a, a) : matmul_nt(a, a);
  const std::size_t p = g.rows();

  double lambda = power_iterate(g, std::vector<double>(p, 1.0), tol, max_iter);
  if (lambda <= 1e-14 * frobenius_sq(a) && frobenius_sq(a) > 0.0) {
    std::vector<double> alt(p);
    for (std::size_t i = 0; i < p; ++i) alt[i] = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + 0.1 * static_cast<double>(i));
    lambda = power_iterate(g, std::move(alt), tol, max_iter);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

std::size_t nnz(const DenseMatrix& a, double zero_tol) {
  std::size_t count = 0;
  for (double v : a.values()) {
    if (std::abs(v) > zero_tol) ++count;
  }
  return count;
}

std::vector<Coord> support(const DenseMatrix& a, double zero_tol) {
  std::vector<Coord> out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) > zero_tol) out.push_back({i, j});
    }
  }
  return out;
}

}  // namespace saa
