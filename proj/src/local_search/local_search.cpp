#include <algorithm>
#include <cmath>
#include <limits>

#include "saa/csv.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/local_search.hpp"
#include "saa/projections.hpp"

namespace saa {

Coord select_leaving(const DenseMatrix& h) {
  Coord best{};
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      const double v = h(i, j);
      if (v != 0.0 && v < best_value) {
        best_value = v;
        best = {i, j};
      }
    }
  }
  if (!std::isfinite(best_value)) throw InvalidInput("select_leaving: H has no nonzero entry");
  return best;
}

Coord select_entering(const DenseMatrix& x, const Factorization& fac, double lambda) {
  const DenseMatrix g = gradient_H(x, fac, lambda);
  Coord best{};
  double best_value = std::numeric_limits<double>::infinity();
  bool found = false;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      if (fac.H(i, j) != 0.0) continue;
      if (!found || g(i, j) < best_value) {
        best_value = g(i, j);
        best = {i, j};
        found = true;
      }
    }
  }
  if (!found) throw InvalidInput("select_entering: H has full support");
  return best;
}

OptimalT optimal_t(const DenseMatrix& x, const DenseMatrix& h_minus, const DenseMatrix& w, const DenseMatrix& wt,
                   double lambda, Coord e) {
  if (e.row >= h_minus.rows() || e.col >= h_minus.cols()) throw InvalidInput("optimal_t: coordinate out of range");
  if (h_minus(e.row, e.col) != 0.0) throw InvalidInput("optimal_t: entering coordinate must be zero in H");
  if (w.rows() != x.rows() || w.cols() != h_minus.rows() || wt.rows() != h_minus.rows() || wt.cols() != x.rows()) {
    throw InvalidInput("optimal_t: shape mismatch");
  }
  const std::size_t m = x.rows(), k = h_minus.rows();
  // Only column j2 of U = X - W H and entry (i2, j2) of V = H - Wt X are needed.
  double num = 0.0, wnorm = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double wh = 0.0;
    for (std::size_t q = 0; q < k; ++q) wh += w(r, q) * h_minus(q, e.col);
    const double u = x(r, e.col) - wh;
    num += u * w(r, e.row);
    wnorm += w(r, e.row) * w(r, e.row);
  }
  double wtx = 0.0;
  for (std::size_t r = 0; r < m; ++r) wtx += wt(e.row, r) * x(r, e.col);
  const double v = h_minus(e.row, e.col) - wtx;
  num -= lambda * v;
  const double den = lambda + wnorm;
  if (!(den > 0.0)) return {0.0, true};
  return {std::max(num / den, 0.0), false};
}

namespace {

double psi(const DenseMatrix& x, const Factorization& f, double lambda) { return objective(x, f, lambda).total; }

DenseMatrix refit_W(const DenseMatrix& x, const DenseMatrix& h, const DenseMatrix& w0, const ApgOptions& opts,
                    std::size_t& iters) {
  const double sh = spectral_norm(h);
  const double lipschitz = 2.0 * std::max(sh * sh, 1e-12);
  auto value = [&](const DenseMatrix& w) { return frobenius_sq(x - matmul(w, h)); };
  auto gradient = [&](const DenseMatrix& w) {
    DenseMatrix g = matmul_nt(x - matmul(w, h), h);
    g *= -2.0;
    return g;
  };
  auto project = [](DenseMatrix& w) {
    for (std::size_t i = 0; i < w.rows(); ++i) project_simplex(w.row(i));
  };
  ApgOutcome out = minimize_apg(w0, lipschitz, value, gradient, project, opts);
  iters += out.iterations;
  return std::move(out.x);
}

DenseMatrix refit_Wt(const DenseMatrix& x, const DenseMatrix& h, const DenseMatrix& wt0, double sigma_x,
                     const ApgOptions& opts, std::size_t& iters) {
  const double lipschitz = 2.0 * sigma_x * sigma_x;
  auto value = [&](const DenseMatrix& wt) { return frobenius_sq(h - matmul(wt, x)); };
  auto gradient = [&](const DenseMatrix& wt) {
    DenseMatrix g = matmul_nt(h - matmul(wt, x), x);
    g *= -2.0;
    return g;
  };
  auto project = [](DenseMatrix& wt) {
    for (std::size_t i = 0; i < wt.rows(); ++i) project_simplex(wt.row(i));
  };
  ApgOutcome out = minimize_apg(wt0, lipschitz, value, gradient, project, opts);
  iters += out.iterations;
  return std::move(out.x);
}

}  // namespace

RefitResult swap_refit(const DenseMatrix& x, const Factorization& fac, double lambda, Coord e,
                       const RefitOptions& opts, std::optional<double> fixed_t) {
  check_feasible(x, fac, fac.H.size());
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidInput("swap_refit: lambda must be finite and >= 0");
  if (e.row >= fac.H.rows() || e.col >= fac.H.cols()) throw InvalidInput("swap_refit: coordinate out of range");
  if (fac.H(e.row, e.col) != 0.0) throw InvalidInput("swap_refit: entering coordinate must be zero in H");
  if (fixed_t && !(*fixed_t >= 0.0)) throw InvalidInput("swap_refit: fixed t must be >= 0");

  const DenseMatrix& h_minus = fac.H;
  const double sigma_x = spectral_norm(x);

  RefitResult res;
  res.factors = fac;
  res.t = fixed_t.value_or(0.0);
  res.factors.H(e.row, e.col) = res.t;
  double prev = psi(x, res.factors, lambda);
  res.objectives.push_back(prev);

  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    res.factors.W = refit_W(x, res.factors.H, res.factors.W, opts.inner, res.inner_iterations);
    if (lambda > 0.0) {
      res.factors.Wt = refit_Wt(x, res.factors.H, res.factors.Wt, sigma_x, opts.inner, res.inner_iterations);
    }
    if (!fixed_t) {
      res.t = optimal_t(x, h_minus, res.factors.W, res.factors.Wt, lambda, e).t;
      res.factors.H(e.row, e.col) = res.t;
    }
    const double cur = psi(x, res.factors, lambda);
    res.objectives.push_back(cur);
    res.alternations = it + 1;
    const bool small = prev - cur <= opts.tol * prev;
    prev = cur;
    if (small) break;
  }
  res.objective = prev;
  return res;
}

LocalSearchResult local_search(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg,
                               const LocalSearchOptions& opts) {
  check_feasible(x, fac, cfg.ell);
  const double lambda = cfg.final_lambda();

  LocalSearchResult res;
  res.factors = fac;
  res.objective = psi(x, fac, lambda);
  const std::size_t total = fac.H.size();

  for (std::size_t s = 0; s < opts.max_swaps; ++s) {
    const std::size_t support = nnz(res.factors.H, 0.0);
    if (support == total) break;

    SwapProposal p;
    p.entering = select_entering(x, res.factors, lambda);
    Factorization start = res.factors;
    if (support >= cfg.ell) {
      p.leaving = select_leaving(res.factors.H);
      start.H(p.leaving->row, p.leaving->col) = 0.0;
    }
    const RefitResult r = swap_refit(x, start, lambda, p.entering, opts.refit);
    p.t_star = r.t;
    p.old_objective = res.objective;
    p.new_objective = r.objective;
    p.accepted = r.objective < res.objective - 1e-12 * res.objective;
    res.proposals.push_back(p);
    if (!p.accepted) break;
    res.factors = r.factors;
    res.objective = r.objective;
    ++res.swaps_accepted;
  }
  return res;
}

void write_swap_log_csv(const std::filesystem::path& path, const std::vector<SwapProposal>& log) {
  std::string out = "leaving_row,leaving_col,entering_row,entering_col,t,delta,accepted\n";
  for (const SwapProposal& p : log) {
    if (p.leaving) {
      out += std::to_string(p.leaving->row) + ',' + std::to_string(p.leaving->col) + ',';
    } else {
      out += ",,";
    }
    out += std::to_string(p.entering.row) + ',' + std::to_string(p.entering.col) + ',' + format_double(p.t_star) +
           ',' + format_double(p.new_objective - p.old_objective) + ',' + (p.accepted ? "1" : "0") + '\n';
  }
  write_text_file(path, out);
}

}  // namespace saa
