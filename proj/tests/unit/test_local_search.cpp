#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "saa/bcd.hpp"
#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"
#include "saa/local_search.hpp"
#include "saa/random.hpp"

using namespace saa;

namespace {

Factorization random_factors(std::size_t m, std::size_t n, std::size_t k, Rng& rng) {
  Factorization f;
  f.H = oracle::random_nonneg(k, n, rng, 0.5);
  f.W = random_row_stochastic(m, k, rng);
  f.Wt = random_row_stochastic(k, m, rng);
  return f;
}

}  // namespace

TEST_CASE("leaving coordinate is the smallest nonzero") {
  CHECK(select_leaving(DenseMatrix::from_rows({{0, 3, 1}, {1, 0, 2}})) == Coord{0, 2});
  CHECK(select_leaving(DenseMatrix::from_rows({{0, 0.5}, {0.2, 0}})) == Coord{1, 0});
  CHECK_THROWS_AS(select_leaving(DenseMatrix(2, 2)), InvalidInput);
}

TEST_CASE("entering coordinate has the most negative off-support derivative") {
  Rng rng(41);
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix x = oracle::random_nonneg(6, 4, rng);
    const Factorization f = random_factors(6, 4, 3, rng);
    if (nnz(f.H, 0.0) == f.H.size()) continue;
    const Coord e = select_entering(x, f, 0.8);
    const DenseMatrix g = gradient_H(x, f, 0.8);
    CHECK(f.H(e.row, e.col) == 0.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        if (f.H(i, j) == 0.0) CHECK(g(e.row, e.col) <= g(i, j));
  }
  Factorization full;
  full.H = DenseMatrix(1, 2, 1.0);
  full.W = DenseMatrix(2, 1, 1.0);
  full.Wt = DenseMatrix(1, 2, 0.5);
  CHECK_THROWS_AS(select_entering(DenseMatrix(2, 2, 1.0), full, 1.0), InvalidInput);
}

TEST_CASE("closed-form step minimizes the objective along the entering direction") {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix x = oracle::random_nonneg(6, 4, rng);
    Factorization f = random_factors(6, 4, 3, rng);
    const Coord e{rng() % 3, rng() % 4};
    f.H(e.row, e.col) = 0.0;
    const double lambda = 0.5;
    const OptimalT o = optimal_t(x, f.H, f.W, f.Wt, lambda, e);
    CHECK(o.t >= 0.0);
    auto along = [&](double s) {
      DenseMatrix h = f.H;
      h(e.row, e.col) = s;
      return oracle::psi(x, h, f.W, f.Wt, lambda);
    };
    const double at = along(o.t);
    for (double s : {0.0, o.t * 0.9, o.t * 1.1 + 1e-3, o.t + 0.5, 3.0}) CHECK(at <= along(s) + 1e-12 * std::abs(at));
  }
}

TEST_CASE("closed-form step is degenerate only without curvature") {
  Factorization f;
  f.H = DenseMatrix(1, 2);
  f.W = DenseMatrix(2, 1, 1.0);
  f.Wt = DenseMatrix(1, 2, 0.5);
  const DenseMatrix x = DenseMatrix::from_rows({{1, 0}, {0, 1}});
  CHECK_FALSE(optimal_t(x, f.H, f.W, f.Wt, 0.0, {0, 0}).degenerate);
  f.H(0, 0) = 1;
  CHECK_THROWS_AS(optimal_t(x, f.H, f.W, f.Wt, 0.0, {0, 0}), InvalidInput);
}

TEST_CASE("refit decreases monotonically and honours a fixed step") {
  Rng rng(43);
  const DenseMatrix x = oracle::random_nonneg(8, 5, rng);
  Factorization f = random_factors(8, 5, 3, rng);
  f.H(1, 2) = 0.0;
  const RefitResult r = swap_refit(x, f, 1.0, {1, 2});
  for (std::size_t i = 1; i < r.objectives.size(); ++i) CHECK(r.objectives[i] <= r.objectives[i - 1] * (1 + 1e-12));
  CHECK(r.factors.H(1, 2) == doctest::Approx(r.t));
  CHECK(r.objective == doctest::Approx(objective(x, r.factors, 1.0).total));
  CHECK_NOTHROW(check_feasible(x, r.factors, 15));
  const RefitResult pinned = swap_refit(x, f, 1.0, {1, 2}, {}, 0.25);
  CHECK(pinned.t == 0.25);
  CHECK(pinned.factors.H(1, 2) == 0.25);
  CHECK_THROWS_AS(swap_refit(x, f, 1.0, {1, 2}, {}, -1.0), InvalidInput);
  CHECK_THROWS_AS(swap_refit(x, r.factors, 1.0, {1, 2}), InvalidInput);
}

TEST_CASE("local search only accepts strict improvements") {
  const SynthInstance s = synth_instance(20, 10, 3, 0.1, 0.2, 5);
  SaaConfig cfg;
  cfg.k = 3;
  cfg.ell = 15;
  cfg.max_iter = 20000;
  const SolveResult base = solve(s.X, default_initialization(s.X, 3, 15), cfg, 1.0);
  const LocalSearchResult r = local_search(s.X, base.factors, cfg);
  const double before = objective(s.X, base.factors, 1.0).total;
  CHECK(r.objective <= before);
  CHECK(r.objective == doctest::Approx(objective(s.X, r.factors, 1.0).total));
  CHECK_NOTHROW(check_feasible(s.X, r.factors, 15));
  std::size_t accepted = 0;
  double last = before;
  for (const SwapProposal& p : r.proposals) {
    CHECK(p.old_objective == doctest::Approx(last));
    if (p.accepted) {
      CHECK(p.new_objective < p.old_objective);
      last = p.new_objective;
      ++accepted;
    }
  }
  CHECK(accepted == r.swaps_accepted);
  if (!r.proposals.empty() && r.proposals.size() < 100) CHECK_FALSE(r.proposals.back().accepted);
}

TEST_CASE("swap log csv") {
  const auto path = std::filesystem::temp_directory_path() / "saa_unit_swaps.csv";
  SwapProposal a;
  a.leaving = Coord{0, 1};
  a.entering = {2, 3};
  a.t_star = 0.5;
  a.old_objective = 2.0;
  a.new_objective = 1.5;
  a.accepted = true;
  SwapProposal b;
  b.entering = {1, 1};
  write_swap_log_csv(path, {a, b});
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "leaving_row,leaving_col,entering_row,entering_col,t,delta,accepted\n"
                    "0,1,2,3,0.5,-0.5,1\n"
                    ",,1,1,0,0,0\n");
  std::filesystem::remove(path);
}
