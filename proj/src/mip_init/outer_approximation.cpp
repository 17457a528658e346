#include <algorithm>
#include <chrono>
#include <limits>
#include <set>

#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/mip_init.hpp"
#include "saa/projections.hpp"
#include "saa/random.hpp"

namespace saa {

namespace {

Pattern thresholded_image(const DenseMatrix& x, const DenseMatrix& wt0, std::size_t ell) {
  const DenseMatrix img = clamp_nonneg(matmul(wt0, x));
  Pattern z(img.size(), 0);
  for (const Coord& c : project_sparse(img, ell).pattern.kept) z[c.row * x.cols() + c.col] = 1;
  return z;
}

}  // namespace

std::vector<std::size_t> furthest_sum_rows(const DenseMatrix& x, std::size_t k) {
  if (x.empty() || k == 0) throw InvalidInput("furthest_sum_rows: empty input");
  const std::size_t m = x.rows();
  std::vector<double> mean(x.cols(), 0.0);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t j = 0; j < x.cols(); ++j) mean[j] += x(u, j) / static_cast<double>(m);
  }
  std::vector<std::size_t> chosen;
  std::vector<double> score(m, 0.0);
  for (std::size_t u = 0; u < m; ++u) score[u] = squared_distance(x.row(u), mean);
  std::vector<bool> used(m, false);
  for (std::size_t i = 0; i < std::min(k, m); ++i) {
    std::size_t best = m;
    for (std::size_t u = 0; u < m; ++u) {
      if (!used[u] && (best == m || score[u] > score[best])) best = u;
    }
    if (i == 0) std::fill(score.begin(), score.end(), 0.0);
    used[best] = true;
    chosen.push_back(best);
    for (std::size_t u = 0; u < m; ++u) score[u] += std::sqrt(squared_distance(x.row(u), x.row(best)));
  }
  return chosen;
}

DenseMatrix initial_weights(const DenseMatrix& x, std::size_t k, StartPattern start, std::uint64_t seed) {
  if (x.empty() || k == 0) throw InvalidInput("initial_weights: empty input");
  DenseMatrix wt0 = uniform_row_stochastic(k, x.rows());
  if (start == StartPattern::kRandom) {
    Rng rng(derive_seed(seed, 2));
    wt0 = random_row_stochastic(k, x.rows(), rng);
  } else if (start == StartPattern::kFurthestSum) {
    // Rows beyond the number of data points keep the uniform start.
    const auto rows = furthest_sum_rows(x, k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      std::fill(wt0.row(i).begin(), wt0.row(i).end(), 0.0);
      wt0(i, rows[i]) = 1.0;
    }
  }
  return wt0;
}

Pattern initial_pattern(const DenseMatrix& x, std::size_t k, std::size_t ell, StartPattern start,
                        std::uint64_t seed) {
  if (x.empty() || k == 0) throw InvalidInput("initial_pattern: empty input");
  return thresholded_image(x, initial_weights(x, k, start, seed), ell);
}

OuterApproxResult outer_approximation(const DenseMatrix& x, std::size_t k, std::size_t ell,
                                      const OuterApproxOptions& opts, MilpBackend* backend) {
  if (x.empty()) throw InvalidInput("outer_approximation: X must be nonempty");
  if (k == 0 || ell == 0 || ell > k * x.cols()) throw InvalidInput("outer_approximation: need 0 < ell <= k n");
  if (!(opts.tol_gap > 0.0)) throw InvalidInput("outer_approximation: tol_gap must be positive");
  if (opts.max_rounds == 0) throw InvalidInput("outer_approximation: max_rounds must be positive");

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  BranchAndBound default_backend(opts.milp);
  MilpBackend& milp = backend ? *backend : default_backend;

  const double b = norm_bound_b(x, k);
  OuterApproxResult res;
  res.cuts.k = k;
  res.cuts.n = x.cols();
  res.cuts.best_upper = std::numeric_limits<double>::infinity();
  res.cuts.best_lower = 0.0;  // F is nonnegative

  std::set<Pattern> seen;
  // The first evaluation starts from the weights that produced Z0, so rows
  // sharing a pattern are not pulled onto a common symmetric minimizer.
  const DenseMatrix wt0 = initial_weights(x, k, opts.start, opts.seed);
  Pattern z = thresholded_image(x, wt0, ell);
  while (true) {
    const DenseMatrix* warm = res.Wt.empty() ? &wt0 : &res.Wt;
    FEvaluation f = eval_F(z, x, k, ell, b, opts.eval, warm);
    seen.insert(z);
    ++res.rounds;

    Cut cut{z, f.value, subgradient_F(f.H, f.Wt, x, b)};
    res.cuts.cuts.push_back(std::move(cut));
    if (f.value < res.cuts.best_upper) {
      res.cuts.best_upper = f.value;
      res.z = z;
      res.H = std::move(f.H);
      res.Wt = std::move(f.Wt);
      res.value = f.value;
    }

    RoundRecord rec{z, res.cuts.cuts.back().value, res.cuts.best_lower, res.cuts.best_upper, 0.0};
    res.cuts.gap = optimality_gap(res.cuts.best_upper, res.cuts.best_lower);
    bool done = res.cuts.gap <= opts.tol_gap || res.rounds >= opts.max_rounds ||
                (opts.time_budget_seconds > 0.0 && elapsed() >= opts.time_budget_seconds);
    if (!done) {
      const MilpResult next = milp.solve(res.cuts, ell);
      res.cuts.best_lower = std::max(res.cuts.best_lower, std::min(next.lower_bound, res.cuts.best_upper));
      res.cuts.gap = optimality_gap(res.cuts.best_upper, res.cuts.best_lower);
      if (res.cuts.gap <= opts.tol_gap) {
        done = true;
      } else if (seen.count(next.z)) {
        res.stalled = true;
        done = true;
      } else {
        z = next.z;
      }
    }
    rec.lower = res.cuts.best_lower;
    rec.gap = res.cuts.gap;
    res.cuts.rounds.push_back(std::move(rec));
    if (done) break;
  }
  return res;
}

}  // namespace saa
