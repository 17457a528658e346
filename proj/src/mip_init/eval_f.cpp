#include <algorithm>
#include <cmath>

#include "saa/apg.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/mip_init.hpp"
#include "saa/projections.hpp"
#include "saa/random.hpp"

namespace saa {

Pattern pattern_of(const DenseMatrix& h, double zero_tol) {
  Pattern z(h.size(), 0);
  const auto hv = h.values();
  for (std::size_t i = 0; i < hv.size(); ++i) z[i] = std::abs(hv[i]) > zero_tol ? 1 : 0;
  return z;
}

DenseMatrix pattern_matrix(const Pattern& z, std::size_t k, std::size_t n) {
  if (z.size() != k * n) throw InvalidInput("pattern size does not match k x n");
  DenseMatrix m(k, n);
  auto mv = m.values();
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] > 1) throw InvalidInput("pattern entries must be 0 or 1");
    mv[i] = z[i];
  }
  return m;
}

double norm_bound_b(const DenseMatrix& x, std::size_t k) {
  if (x.empty()) throw InvalidInput("norm_bound_b: X must be nonempty");
  if (k == 0) throw InvalidInput("norm_bound_b: k must be positive");
  const auto norms = row_norms(x);
  const auto [lo, hi] = std::minmax_element(norms.begin(), norms.end());
  const double kk = static_cast<double>(k);
  const double s = *hi + std::sqrt(kk) * *lo;
  return kk * s * s;
}

namespace {

// Joint variable [H | Wt] stored as a k x (n + m) matrix.
DenseMatrix join(const DenseMatrix& h, const DenseMatrix& wt) {
  DenseMatrix v(h.rows(), h.cols() + wt.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) v(i, j) = h(i, j);
    for (std::size_t j = 0; j < wt.cols(); ++j) v(i, h.cols() + j) = wt(i, j);
  }
  return v;
}

void split(const DenseMatrix& v, std::size_t n, DenseMatrix& h, DenseMatrix& wt) {
  const std::size_t m = v.cols() - n;
  h = DenseMatrix(v.rows(), n);
  wt = DenseMatrix(v.rows(), m);
  for (std::size_t i = 0; i < v.rows(); ++i) {
    for (std::size_t j = 0; j < n; ++j) h(i, j) = v(i, j);
    for (std::size_t j = 0; j < m; ++j) wt(i, j) = v(i, n + j);
  }
}

DenseMatrix box_clip(const DenseMatrix& a, const DenseMatrix& upper) {
  DenseMatrix out = a;
  auto ov = out.values();
  const auto uv = upper.values();
  for (std::size_t i = 0; i < ov.size(); ++i) ov[i] = std::clamp(ov[i], 0.0, uv[i]);
  return out;
}

}  // namespace

FEvaluation eval_F(const DenseMatrix& z, const DenseMatrix& x, std::size_t ell, double b, const EvalOptions& opts,
                   const DenseMatrix* warm_wt) {
  if (x.empty()) throw InvalidInput("eval_F: X must be nonempty");
  if (z.cols() != x.cols() || z.rows() == 0) throw InvalidInput("eval_F: Z must be k x n with n = cols(X)");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidInput("eval_F: b must be positive");
  double total = 0.0;
  for (double v : z.values()) {
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("eval_F: Z entries must lie in [0,1]");
    total += v;
  }
  if (total > static_cast<double>(ell) + 1e-9) throw InvalidInput("eval_F: pattern exceeds the sparsity budget");

  const std::size_t k = z.rows(), n = x.cols(), m = x.rows();
  DenseMatrix upper = z;
  upper *= std::sqrt(b);

  DenseMatrix wt0 = uniform_row_stochastic(k, m);
  if (warm_wt) {
    if (warm_wt->rows() != k || warm_wt->cols() != m) throw InvalidInput("eval_F: warm start Wt has wrong shape");
    wt0 = project_simplex_rows(*warm_wt);
  }
  const DenseMatrix h0 = box_clip(matmul(wt0, x), upper);

  const double sx = spectral_norm(x);
  const double lipschitz = 2.0 * (1.0 + sx * sx);

  auto residual = [&](const DenseMatrix& v) {
    DenseMatrix h, wt;
    split(v, n, h, wt);
    return h - matmul(wt, x);
  };
  auto value = [&](const DenseMatrix& v) { return frobenius_sq(residual(v)); };
  auto gradient = [&](const DenseMatrix& v) {
    DenseMatrix r = residual(v);
    r *= 2.0;
    DenseMatrix gwt = matmul_nt(r, x);
    gwt *= -1.0;
    return join(r, gwt);
  };
  auto project = [&](DenseMatrix& v) {
    for (std::size_t i = 0; i < k; ++i) {
      auto row = v.row(i);
      for (std::size_t j = 0; j < n; ++j) row[j] = std::clamp(row[j], 0.0, upper(i, j));
      project_simplex(row.subspan(n));
    }
  };

  ApgOptions apg;
  apg.tol = opts.tol;
  apg.max_iter = opts.max_iter;
  apg.abs_floor = 1e-28 * std::max(1.0, frobenius_sq(x));
  const ApgOutcome out = minimize_apg(join(h0, wt0), lipschitz, value, gradient, project, apg);

  FEvaluation res;
  DenseMatrix h_unused;
  split(out.x, n, h_unused, res.Wt);
  // For fixed Wt the H block separates into a box clip.
  res.H = box_clip(matmul(res.Wt, x), upper);
  res.value = frobenius_sq(res.H - matmul(res.Wt, x));
  // Round-off residue of an exactly attainable zero.
  if (res.value <= 1e-20 * std::max(1.0, frobenius_sq(x))) res.value = 0.0;
  res.iterations = out.iterations;
  res.converged = out.converged;
  return res;
}

FEvaluation eval_F(const Pattern& z, const DenseMatrix& x, std::size_t k, std::size_t ell, double b,
                   const EvalOptions& opts, const DenseMatrix* warm_wt) {
  if (k == 0) throw InvalidInput("eval_F: k must be positive");
  return eval_F(pattern_matrix(z, k, x.cols()), x, ell, b, opts, warm_wt);
}

DenseMatrix subgradient_F(const DenseMatrix& h_star, const DenseMatrix& wt_star, const DenseMatrix& x, double b) {
  if (wt_star.cols() != x.rows() || h_star.rows() != wt_star.rows() || h_star.cols() != x.cols()) {
    throw InvalidInput("subgradient_F: shape mismatch");
  }
  DenseMatrix g = matmul(wt_star, x) - h_star;
  const double scale = -2.0 * std::sqrt(b);
  for (double& v : g.values()) v = v > 0.0 ? scale * v : 0.0;
  return g;
}

}  // namespace saa
