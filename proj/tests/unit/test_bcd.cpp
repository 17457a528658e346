#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "saa/bcd.hpp"
#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"
#include "saa/random.hpp"

using namespace saa;

namespace {

Factorization random_factors(std::size_t m, std::size_t n, std::size_t k, Rng& rng) {
  Factorization f;
  f.H = oracle::random_nonneg(k, n, rng, 0.3);
  f.W = random_row_stochastic(m, k, rng);
  f.Wt = random_row_stochastic(k, m, rng);
  return f;
}

template <class F>
DenseMatrix central_difference(DenseMatrix at, F&& f, double h = 1e-4) {
  DenseMatrix g(at.rows(), at.cols());
  for (std::size_t i = 0; i < at.size(); ++i) {
    const double v = at.values()[i];
    at.values()[i] = v + h;
    const double up = f(at);
    at.values()[i] = v - h;
    const double down = f(at);
    at.values()[i] = v;
    g.values()[i] = (up - down) / (2.0 * h);
  }
  return g;
}

void check_close(const DenseMatrix& a, const DenseMatrix& b, double rel) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.values()[i] - b.values()[i]) <= rel * std::max(1.0, std::abs(b.values()[i])));
  }
}

}  // namespace

TEST_CASE("objective matches the entrywise definition") {
  Rng rng(1);
  const DenseMatrix x = oracle::random_nonneg(7, 5, rng);
  const Factorization f = random_factors(7, 5, 3, rng);
  const ObjectiveBreakdown o = objective(x, f, 2.5);
  CHECK(o.total == doctest::Approx(oracle::psi(x, f.H, f.W, f.Wt, 2.5)).epsilon(1e-12));
  CHECK(o.total == doctest::Approx(o.fit + 2.5 * o.reg));
}

TEST_CASE("block gradients match central differences") {
  Rng rng(2);
  for (int t = 0; t < 5; ++t) {
    const DenseMatrix x = oracle::random_nonneg(6, 4, rng);
    const Factorization f = random_factors(6, 4, 3, rng);
    const double lambda = 0.7;
    check_close(gradient_H(x, f, lambda), central_difference(f.H, [&](const DenseMatrix& h) {
                  return oracle::psi(x, h, f.W, f.Wt, lambda);
                }), 1e-6);
    check_close(gradient_W(x, f), central_difference(f.W, [&](const DenseMatrix& w) {
                  return oracle::psi(x, f.H, w, f.Wt, lambda);
                }), 1e-6);
    check_close(gradient_Wt(x, f, lambda), central_difference(f.Wt, [&](const DenseMatrix& wt) {
                  return oracle::psi(x, f.H, f.W, wt, lambda);
                }), 1e-6);
  }
}

TEST_CASE("lipschitz constants follow the block formulas") {
  Rng rng(3);
  const DenseMatrix x = oracle::random_nonneg(6, 4, rng);
  const Factorization f = random_factors(6, 4, 3, rng);
  const LipschitzConstants l = lipschitz_constants(f.W, f.H, x, 2.0, 1e-6);
  const double sw = spectral_norm(f.W), sh = spectral_norm(f.H), sx = spectral_norm(x);
  CHECK(l.l1 == doctest::Approx(2.0 * (2.0 + sw * sw)));
  CHECK(l.l2 == doctest::Approx(2.0 * sh * sh));
  CHECK(l.l3 == doctest::Approx(2.0 * 2.0 * sx * sx));
  const LipschitzConstants z = lipschitz_constants(f.W, DenseMatrix(3, 4), x, 2.0, 1e-6);
  CHECK(z.l2 == doctest::Approx(2e-6));
}

TEST_CASE("block steps keep every block feasible and do not increase the objective") {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix x = oracle::random_nonneg(8, 5, rng);
    Factorization f = random_factors(8, 5, 3, rng);
    const std::size_t ell = 4;
    f.H = project_sparse(f.H, ell).matrix;
    const double lambda = 1.0;
    double prev = objective(x, f, lambda).total;
    f.H = step_H(x, f, lambda, ell);
    CHECK(nnz(f.H, 0.0) <= ell);
    for (double v : f.H.values()) CHECK(v >= 0.0);
    f.W = step_W(x, f, 1e-6);
    f.Wt = step_Wt(x, f, lambda);
    CHECK_NOTHROW(check_feasible(x, f, ell));
    const double now = objective(x, f, lambda).total;
    CHECK(now <= prev * (1 + 1e-12));
  }
}

TEST_CASE("archetype block is vacuous without the penalty") {
  Rng rng(5);
  const DenseMatrix x = oracle::random_nonneg(5, 3, rng);
  const Factorization f = random_factors(5, 3, 2, rng);
  CHECK(step_Wt(x, f, 0.0) == f.Wt);
}

TEST_CASE("feasibility check names violations") {
  Rng rng(6);
  const DenseMatrix x = oracle::random_nonneg(5, 3, rng);
  Factorization f = random_factors(5, 3, 2, rng);
  f.H = DenseMatrix(2, 3, 0.5);
  CHECK_THROWS_AS(check_feasible(x, f, 2), InvalidInput);
  CHECK_NOTHROW(check_feasible(x, f, 6));
  f.H(0, 0) = -1;
  CHECK_THROWS_AS(check_feasible(x, f, 6), InvalidInput);
  f.H(0, 0) = 0;
  f.W(0, 0) += 0.1;
  CHECK_THROWS_AS(check_feasible(x, f, 6), InvalidInput);
  CHECK_THROWS_AS(check_feasible(DenseMatrix(4, 3), f, 6), InvalidInput);
}

TEST_CASE("initializations") {
  Rng rng(7);
  const DenseMatrix x = oracle::random_nonneg(6, 4, rng);
  const Factorization z = zero_initialization(x, 3, 9);
  CHECK(nnz(z.H, 0.0) == 0);
  CHECK_NOTHROW(check_feasible(x, z, 1));
  CHECK(zero_initialization(x, 3, 9).W == z.W);
  const Factorization d = default_initialization(x, 3, 5);
  CHECK(nnz(d.H, 0.0) <= 5);
  CHECK_NOTHROW(check_feasible(x, d, 5));
}

TEST_CASE("solve descends monotonically and returns a stationary iterate") {
  const SynthInstance s = synth_instance(20, 10, 3, 0.1, 0.2, 3);
  SaaConfig cfg;
  cfg.k = 3;
  cfg.ell = 15;
  cfg.max_iter = 100000;
  const SolveResult r = solve(s.X, default_initialization(s.X, 3, 15), cfg, 1.0);
  for (std::size_t i = 1; i < r.trace.objectives.size(); ++i) {
    CHECK(r.trace.objectives[i] <= r.trace.objectives[i - 1] + 1e-9 * std::abs(r.trace.objectives[i - 1]));
  }
  CHECK(r.trace.converged);
  const StationarityReport st = stationarity_residual(s.X, r.factors, cfg, 1.0);
  CHECK(st.residual < 1e-6);
  CHECK(st.residual == doctest::Approx(r.trace.stationarity_residual));
  CHECK_NOTHROW(check_feasible(s.X, r.factors, 15));
  CHECK(r.trace.objectives.back() == doctest::Approx(objective(s.X, r.factors, 1.0).total).epsilon(1e-12));
}

TEST_CASE("solve is deterministic and validates lambda") {
  const SynthInstance s = synth_instance(10, 6, 2, 0.1, 0.2, 1);
  SaaConfig cfg;
  cfg.k = 2;
  cfg.ell = 6;
  cfg.max_iter = 200;
  const Factorization init = zero_initialization(s.X, 2, 0);
  CHECK(solve(s.X, init, cfg, 1.0).factors.H == solve(s.X, init, cfg, 1.0).factors.H);
  CHECK_THROWS_AS(solve(s.X, init, cfg, -1.0), InvalidInput);
}
