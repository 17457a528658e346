#include <algorithm>
#include <cmath>
#include <functional>

#include "saa/bcd.hpp"
#include "saa/csv.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"

namespace saa {

namespace {

// Products at the current point, reused by the next sweep.
struct SweepCache {
  DenseMatrix wh;   // W H
  DenseMatrix wtx;  // Wt X
};

struct SweepOutput {
  Factorization next;
  SweepCache cache;
  ObjectiveBreakdown objective;
  StepSizes steps;
  DenseMatrix t;  // max(0, H - grad_H / (2 L1)) before thresholding
  double dh = 0.0, dw = 0.0, dwt = 0.0;
};

SweepCache make_cache(const DenseMatrix& x, const Factorization& f) {
  return {matmul(f.W, f.H), matmul(f.Wt, x)};
}

DenseMatrix h_candidate(const DenseMatrix& x, const Factorization& f, const DenseMatrix& wh,
                        const DenseMatrix& wtx, double lambda, double& step) {
  const double sw = spectral_norm(f.W);
  const double l1 = 2.0 * (lambda + sw * sw);
  step = 1.0 / (2.0 * l1);
  // grad_H = -2 W^T (X - W H) + 2 lambda (H - Wt X)
  DenseMatrix grad = matmul_tn(f.W, x - wh);
  grad *= -2.0;
  DenseMatrix v = f.H - wtx;
  v *= 2.0 * lambda;
  grad += v;
  DenseMatrix pi = f.H;
  auto pv = pi.values();
  const auto gv = grad.values();
  for (std::size_t i = 0; i < pv.size(); ++i) pv[i] -= step * gv[i];
  return clamp_nonneg(pi);
}

DenseMatrix w_update(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h, const DenseMatrix& wh,
                     double eps, double& step) {
  const double sh = spectral_norm(h);
  const double l2 = 2.0 * std::max(sh * sh, eps);
  step = 1.0 / (2.0 * l2);
  // grad_W = -2 (X - W H) H^T
  DenseMatrix grad = matmul_nt(x - wh, h);
  DenseMatrix next = w;
  auto nv = next.values();
  const auto gv = grad.values();
  for (std::size_t i = 0; i < nv.size(); ++i) nv[i] += step * 2.0 * gv[i];
  return project_simplex_rows(next);
}

DenseMatrix wt_update(const DenseMatrix& x, const DenseMatrix& wt, const DenseMatrix& h, const DenseMatrix& wtx,
                      double lambda, double sigma_x, double& step) {
  const double l3 = 2.0 * lambda * sigma_x * sigma_x;
  if (!(l3 > 0.0)) {
    step = 0.0;
    return wt;
  }
  step = 1.0 / (2.0 * l3);
  // grad_Wt = -2 lambda (H - Wt X) X^T
  DenseMatrix grad = matmul_nt(h - wtx, x);
  DenseMatrix next = wt;
  auto nv = next.values();
  const auto gv = grad.values();
  for (std::size_t i = 0; i < nv.size(); ++i) nv[i] += step * 2.0 * lambda * gv[i];
  return project_simplex_rows(next);
}

SweepOutput sweep(const DenseMatrix& x, const Factorization& f, const SweepCache& cache, double lambda,
                  std::size_t ell, double eps, double sigma_x) {
  SweepOutput out;
  out.t = h_candidate(x, f, cache.wh, cache.wtx, lambda, out.steps.h);
  out.next.H = project_sparse(out.t, ell).matrix;

  const DenseMatrix wh_mid = matmul(f.W, out.next.H);
  out.next.W = w_update(x, f.W, out.next.H, wh_mid, eps, out.steps.w);

  // Wt X is unchanged by the H and W updates.
  out.next.Wt = wt_update(x, f.Wt, out.next.H, cache.wtx, lambda, sigma_x, out.steps.wt);

  out.cache.wh = matmul(out.next.W, out.next.H);
  out.cache.wtx = out.steps.wt > 0.0 ? matmul(out.next.Wt, x) : cache.wtx;
  out.objective.fit = frobenius_sq(x - out.cache.wh);
  out.objective.reg = frobenius_sq(out.next.H - out.cache.wtx);
  out.objective.total = out.objective.fit + lambda * out.objective.reg;

  out.dh = frobenius_distance(out.next.H, f.H);
  out.dw = frobenius_distance(out.next.W, f.W);
  out.dwt = frobenius_distance(out.next.Wt, f.Wt);
  return out;
}

void tie_condition(const DenseMatrix& t, std::size_t ell, StationarityReport& rep) {
  std::vector<double> vals;
  for (double v : t.values()) {
    if (v > 0.0) vals.push_back(v);
  }
  rep.t_nnz = vals.size();
  if (vals.size() <= ell || ell == 0) {
    rep.boundary_gap = 0.0;
    rep.boundary_tie = false;
    return;
  }
  std::sort(vals.begin(), vals.end(), std::greater<>());
  const double a = vals[ell - 1], b = vals[ell];
  rep.boundary_gap = a - b;
  rep.boundary_tie = rep.boundary_gap <= 1e-12 * std::max(1.0, a);
}

void require_lambda(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidInput("lambda must be finite and >= 0");
}

}  // namespace

DenseMatrix step_H(const DenseMatrix& x, const Factorization& fac, double lambda, std::size_t ell) {
  check_feasible(x, fac, fac.H.size());
  require_lambda(lambda);
  double step = 0.0;
  const DenseMatrix t = h_candidate(x, fac, matmul(fac.W, fac.H), matmul(fac.Wt, x), lambda, step);
  return project_sparse(t, ell).matrix;
}

DenseMatrix step_W(const DenseMatrix& x, const Factorization& fac, double eps) {
  check_feasible(x, fac, fac.H.size());
  if (!(eps > 0.0)) throw InvalidInput("eps safeguard must be positive");
  double step = 0.0;
  return w_update(x, fac.W, fac.H, matmul(fac.W, fac.H), eps, step);
}

DenseMatrix step_Wt(const DenseMatrix& x, const Factorization& fac, double lambda, double sigma_x) {
  check_feasible(x, fac, fac.H.size());
  require_lambda(lambda);
  if (lambda == 0.0) return fac.Wt;
  if (sigma_x < 0.0) sigma_x = spectral_norm(x);
  double step = 0.0;
  return wt_update(x, fac.Wt, fac.H, matmul(fac.Wt, x), lambda, sigma_x, step);
}

StationarityReport stationarity_residual(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg,
                                         double lambda) {
  check_feasible(x, fac, cfg.ell);
  require_lambda(lambda);
  const SweepOutput s = sweep(x, fac, make_cache(x, fac), lambda, cfg.ell, cfg.eps_safeguard, spectral_norm(x));
  StationarityReport rep;
  rep.dh = s.dh;
  rep.dw = s.dw;
  rep.dwt = s.dwt;
  rep.residual = std::max({s.dh, s.dw, s.dwt});
  tie_condition(s.t, cfg.ell, rep);
  return rep;
}

StationarityReport stationarity_residual(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg) {
  return stationarity_residual(x, fac, cfg, cfg.final_lambda());
}

SolveResult solve(const DenseMatrix& x, const Factorization& init, const SaaConfig& cfg, double lambda) {
  check_feasible(x, init, cfg.ell);
  require_lambda(lambda);
  const double sigma_x = spectral_norm(x);

  SolveResult res;
  res.factors = init;
  SweepCache cache = make_cache(x, res.factors);
  ObjectiveBreakdown current{frobenius_sq(x - cache.wh), frobenius_sq(res.factors.H - cache.wtx), 0.0};
  current.total = current.fit + lambda * current.reg;
  res.trace.objectives.push_back(current.total);
  res.trace.fits.push_back(current.fit);
  res.trace.regs.push_back(current.reg);

  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    SweepOutput s = sweep(x, res.factors, cache, lambda, cfg.ell, cfg.eps_safeguard, sigma_x);
    res.trace.iterations = it + 1;
    if (!std::isfinite(s.objective.total)) throw NumericalError("objective became non-finite");

    const double moved = std::max({s.dh, s.dw, s.dwt});
    const double decrease = current.total > 0.0 ? (current.total - s.objective.total) / current.total : 0.0;
    if (moved < cfg.tol_stationary && decrease < cfg.tol_objective) {
      // The current iterate passed its own stationarity test.
      res.trace.converged = true;
      res.trace.stationarity_residual = moved;
      StationarityReport rep;
      tie_condition(s.t, cfg.ell, rep);
      res.trace.boundary_tie = rep.boundary_tie;
      return res;
    }

    res.factors = std::move(s.next);
    cache = std::move(s.cache);
    current = s.objective;
    res.trace.objectives.push_back(current.total);
    res.trace.fits.push_back(current.fit);
    res.trace.regs.push_back(current.reg);
    res.trace.step_sizes.push_back(s.steps);
    res.trace.stationarity_residual = moved;
  }
  return res;
}

SolveResult solve(const DenseMatrix& x, const Factorization& init, const SaaConfig& cfg) {
  return solve(x, init, cfg, cfg.final_lambda());
}

void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace) {
  std::string out = "iteration,fit,reg,total\n";
  for (std::size_t i = 0; i < trace.objectives.size(); ++i) {
    out += std::to_string(i) + ',' + format_double(trace.fits[i]) + ',' + format_double(trace.regs[i]) + ',' +
           format_double(trace.objectives[i]) + '\n';
  }
  write_text_file(path, out);
}

}  // namespace saa
