#include <algorithm>
#include <cmath>
#include <string>

#include "saa/bcd.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"
#include "saa/random.hpp"

namespace saa {

namespace {

void require_shapes(const DenseMatrix& x, const Factorization& fac) {
  const std::size_t m = x.rows(), n = x.cols(), k = fac.H.rows();
  if (fac.H.cols() != n || fac.W.rows() != m || fac.W.cols() != k || fac.Wt.rows() != k || fac.Wt.cols() != m) {
    throw InvalidInput("factorization shapes inconsistent with data: X " + std::to_string(m) + "x" +
                       std::to_string(n) + ", H " + std::to_string(fac.H.rows()) + "x" +
                       std::to_string(fac.H.cols()) + ", W " + std::to_string(fac.W.rows()) + "x" +
                       std::to_string(fac.W.cols()) + ", Wt " + std::to_string(fac.Wt.rows()) + "x" +
                       std::to_string(fac.Wt.cols()));
  }
}

void require_row_stochastic(const DenseMatrix& a, const char* name) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (double v : a.row(i)) {
      if (v < 0.0) throw InvalidInput(std::string(name) + " has a negative entry in row " + std::to_string(i));
      s += v;
    }
    if (std::abs(s - 1.0) > kRowSumTol) {
      throw InvalidInput(std::string(name) + " row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
  }
}

}  // namespace

void check_feasible(const DenseMatrix& x, const Factorization& fac, std::size_t ell) {
  require_shapes(x, fac);
  for (double v : fac.H.values()) {
    if (v < 0.0) throw InvalidInput("H has a negative entry");
  }
  const std::size_t count = nnz(fac.H, 0.0);
  if (count > ell) {
    throw InvalidInput("H has " + std::to_string(count) + " nonzeros, budget is " + std::to_string(ell));
  }
  require_row_stochastic(fac.W, "W");
  require_row_stochastic(fac.Wt, "Wt");
}

Factorization default_initialization(const DenseMatrix& x, std::size_t k, std::size_t ell) {
  Factorization f;
  f.W = uniform_row_stochastic(x.rows(), k);
  f.Wt = uniform_row_stochastic(k, x.rows());
  f.H = project_sparse(clamp_nonneg(matmul(f.Wt, x)), ell).matrix;
  return f;
}

Factorization zero_initialization(const DenseMatrix& x, std::size_t k, std::uint64_t seed) {
  Rng rng(seed);
  Factorization f;
  f.H = DenseMatrix(k, x.cols());
  f.W = random_row_stochastic(x.rows(), k, rng);
  f.Wt = random_row_stochastic(k, x.rows(), rng);
  return f;
}

ObjectiveBreakdown objective(const DenseMatrix& x, const Factorization& fac, double lambda) {
  require_shapes(x, fac);
  ObjectiveBreakdown out;
  out.fit = frobenius_sq(x - matmul(fac.W, fac.H));
  out.reg = frobenius_sq(fac.H - matmul(fac.Wt, x));
  out.total = out.fit + lambda * out.reg;
  return out;
}

DenseMatrix gradient_H(const DenseMatrix& x, const Factorization& fac, double lambda) {
  require_shapes(x, fac);
  DenseMatrix g = matmul_tn(fac.W, x - matmul(fac.W, fac.H));
  g *= -2.0;
  DenseMatrix v = fac.H - matmul(fac.Wt, x);
  v *= 2.0 * lambda;
  return g += v;
}

DenseMatrix gradient_W(const DenseMatrix& x, const Factorization& fac) {
  require_shapes(x, fac);
  DenseMatrix g = matmul_nt(x - matmul(fac.W, fac.H), fac.H);
  return g *= -2.0;
}

DenseMatrix gradient_Wt(const DenseMatrix& x, const Factorization& fac, double lambda) {
  require_shapes(x, fac);
  DenseMatrix g = matmul_nt(fac.H - matmul(fac.Wt, x), x);
  return g *= -2.0 * lambda;
}

LipschitzConstants lipschitz_constants(const DenseMatrix& w, const DenseMatrix& h, const DenseMatrix& x,
                                       double lambda, double eps) {
  if (!(eps > 0.0)) throw InvalidInput("eps safeguard must be positive");
  const double sw = spectral_norm(w);
  const double sh = spectral_norm(h);
  const double sx = spectral_norm(x);
  return {2.0 * (lambda + sw * sw), 2.0 * std::max(sh * sh, eps), 2.0 * lambda * sx * sx};
}

}  // namespace saa
