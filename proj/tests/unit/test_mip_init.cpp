#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"
#include "saa/mip_init.hpp"
#include "saa/random.hpp"

using namespace saa;

namespace {

Pattern random_pattern(std::size_t d, std::size_t ell, Rng& rng) {
  Pattern z(d, 0);
  const std::size_t ones = rng() % (ell + 1);
  for (std::size_t c = 0; c < ones; ++c) z[rng() % d] = 1;
  return z;
}

CutSet random_cuts(std::size_t k, std::size_t n, std::size_t count, std::size_t ell, Rng& rng) {
  CutSet cs;
  cs.k = k;
  cs.n = n;
  std::normal_distribution<double> g(0.0, 1.0);
  for (std::size_t c = 0; c < count; ++c) {
    Cut cut;
    cut.pattern = random_pattern(k * n, ell, rng);
    cut.value = std::abs(g(rng)) * 3.0;
    cut.grad = random_normal(k, n, rng);
    cs.cuts.push_back(cut);
  }
  return cs;
}

}  // namespace

TEST_CASE("norm bound follows its closed form") {
  const DenseMatrix x = DenseMatrix::from_rows({{3, 4}, {1, 0}});
  CHECK(norm_bound_b(x, 2) == doctest::Approx(2.0 * std::pow(5.0 + std::sqrt(2.0), 2)));
  CHECK_THROWS_AS(norm_bound_b(DenseMatrix(), 2), InvalidInput);
}

TEST_CASE("pattern helpers") {
  const DenseMatrix h = DenseMatrix::from_rows({{0, 2}, {1e-3, 0}});
  CHECK(pattern_of(h) == Pattern{0, 1, 1, 0});
  CHECK(pattern_of(h, 1e-2) == Pattern{0, 1, 0, 0});
  CHECK(pattern_matrix({0, 1, 1, 0}, 2, 2) == DenseMatrix::from_rows({{0, 1}, {1, 0}}));
  CHECK_THROWS_AS(pattern_matrix({0, 1, 1}, 2, 2), InvalidInput);
}

TEST_CASE("F agrees with an independent projected-gradient evaluation") {
  Rng rng(31);
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix x = oracle::random_nonneg(5, 3, rng);
    const double b = norm_bound_b(x, 2);
    const Pattern z = random_pattern(6, 4, rng);
    const FEvaluation f = eval_F(z, x, 2, 4, b);
    const double ref = oracle::f_value(z, x, 2, b);
    CHECK(std::abs(f.value - ref) <= 1e-6 * std::max(1.0, ref));
    for (double w : row_sums(f.Wt)) CHECK(w == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (!z[i]) CHECK(f.H.values()[i] == 0.0);
    }
  }
}

TEST_CASE("F is zero for the full pattern and validates its inputs") {
  Rng rng(32);
  const DenseMatrix x = oracle::random_nonneg(5, 3, rng);
  const double b = norm_bound_b(x, 2);
  CHECK(eval_F(Pattern(6, 1), x, 2, 6, b).value == 0.0);
  CHECK_THROWS_AS(eval_F(Pattern(6, 1), x, 2, 5, b), InvalidInput);
  CHECK_THROWS_AS(eval_F(Pattern(6, 1), x, 2, 6, -1.0), InvalidInput);
  DenseMatrix frac(2, 3, 0.5);
  CHECK_NOTHROW(eval_F(frac, x, 3, b));
  frac(0, 0) = 1.5;
  CHECK_THROWS_AS(eval_F(frac, x, 6, b), InvalidInput);
}

TEST_CASE("subgradient cuts underestimate F") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const DenseMatrix x = oracle::random_nonneg(4, 3, rng);
    const double b = norm_bound_b(x, 2);
    const Pattern z = random_pattern(6, 6, rng);
    const FEvaluation f = eval_F(z, x, 2, 6, b);
    Cut cut{z, f.value, subgradient_F(f.H, f.Wt, x, b)};
    for (double g : cut.grad.values()) CHECK(g <= 0.0);
    CHECK(cut.evaluate(z) == doctest::Approx(f.value));
    for (const Pattern& zp : oracle::patterns_up_to(6, 6)) {
      const double fp = eval_F(zp, x, 2, 6, b).value;
      CHECK(fp >= cut.evaluate(zp) - 1e-6 * std::max(1.0, fp));
    }
  }
}

TEST_CASE("cut arithmetic and gap") {
  Cut c{{1, 0}, 2.0, DenseMatrix::from_rows({{-1, -3}})};
  CHECK(c.intercept() == doctest::Approx(3.0));
  CHECK(c.evaluate({0, 1}) == doctest::Approx(0.0));
  CHECK(c.evaluate({1, 1}) == doctest::Approx(-1.0));
  CHECK(optimality_gap(10, 4) == doctest::Approx(0.6));
  CHECK(optimality_gap(0, -1) == 0.0);
  CHECK(optimality_gap(1, 2) == 0.0);
}

TEST_CASE("cut sets round trip through json") {
  Rng rng(34);
  CutSet cs = random_cuts(2, 3, 4, 3, rng);
  cs.best_upper = 3.5;
  cs.best_lower = 1.25;
  cs.gap = optimality_gap(3.5, 1.25);
  cs.rounds.push_back({cs.cuts[0].pattern, 3.5, 1.25, 3.5, cs.gap});
  const CutSet back = cutset_from_json(to_json(cs));
  REQUIRE(back.cuts.size() == cs.cuts.size());
  for (std::size_t i = 0; i < cs.cuts.size(); ++i) {
    CHECK(back.cuts[i].pattern == cs.cuts[i].pattern);
    CHECK(back.cuts[i].value == cs.cuts[i].value);
    CHECK(back.cuts[i].grad == cs.cuts[i].grad);
  }
  CHECK(back.best_upper == 3.5);
  CHECK(back.rounds.size() == 1);
  CHECK_THROWS_AS(cutset_from_json(nlohmann::json{{"k", 2}}), InvalidInput);
}

TEST_CASE("branch and bound matches enumeration") {
  Rng rng(35);
  for (int t = 0; t < 60; ++t) {
    const std::size_t k = 1 + rng() % 3, n = 1 + rng() % (12 / k);
    const std::size_t ell = 1 + rng() % (k * n);
    const CutSet cs = random_cuts(k, n, 1 + rng() % 6, ell, rng);
    const MilpResult r = milp_min_cuts(cs, ell);
    const oracle::MilpOptimum ref = oracle::milp_enumerate(cs, ell);
    CHECK(r.optimal);
    CHECK(r.eta == doctest::Approx(ref.value).epsilon(1e-9));
    CHECK(r.lower_bound == doctest::Approx(r.eta));
    CHECK(cs.model(r.z) == doctest::Approx(r.eta));
    std::size_t ones = 0;
    for (auto v : r.z) ones += v;
    CHECK(ones <= ell);
  }
}

TEST_CASE("truncated branch and bound still reports a valid bound") {
  Rng rng(36);
  const CutSet cs = random_cuts(3, 5, 8, 7, rng);
  MilpOptions opts;
  opts.node_limit = 3;
  const MilpResult r = milp_min_cuts(cs, 7, opts);
  const oracle::MilpOptimum ref = oracle::milp_enumerate(cs, 7);
  CHECK(r.lower_bound <= ref.value + 1e-9);
  CHECK(r.eta >= ref.value - 1e-9);
  CHECK_THROWS_AS(milp_min_cuts(CutSet{}, 1), InvalidInput);
}

TEST_CASE("initial patterns respect the budget") {
  Rng rng(37);
  const DenseMatrix x = oracle::random_nonneg(8, 5, rng);
  for (StartPattern s : {StartPattern::kUniform, StartPattern::kRandom, StartPattern::kFurthestSum}) {
    const Pattern z = initial_pattern(x, 3, 7, s, 1);
    std::size_t ones = 0;
    for (auto v : z) ones += v;
    CHECK(ones <= 7);
    CHECK(z.size() == 15);
  }
  const auto rows = furthest_sum_rows(x, 4);
  CHECK(std::set<std::size_t>(rows.begin(), rows.end()).size() == rows.size());
  CHECK(furthest_sum_rows(x, 20).size() == 8);
}

TEST_CASE("outer approximation finds the best pattern on a tiny instance") {
  Rng rng(38);
  const DenseMatrix x = oracle::random_nonneg(4, 3, rng);
  const double b = norm_bound_b(x, 2);
  double best = 1e300;
  for (const Pattern& z : oracle::patterns_up_to(6, 2)) best = std::min(best, eval_F(z, x, 2, 2, b).value);
  const OuterApproxResult r = outer_approximation(x, 2, 2);
  CHECK(r.value == doctest::Approx(best).epsilon(1e-6));
  for (std::size_t i = 1; i < r.cuts.rounds.size(); ++i) CHECK(r.cuts.rounds[i].lower >= r.cuts.rounds[i - 1].lower);
  CHECK_THROWS_AS(outer_approximation(x, 2, 0), InvalidInput);
}

TEST_CASE("furthest-sum start keeps archetypes with a shared pattern apart") {
  // Two rows of H0 vanish on the same column, so Z0 repeats a pattern row.
  const SynthInstance s = synth_separable_instance(20, 6, 3, 1e-5, 0.2, 1006);
  OuterApproxOptions opts;
  opts.start = StartPattern::kFurthestSum;
  opts.max_rounds = 1;
  const OuterApproxResult r = outer_approximation(s.X, 3, nnz(s.H0, 0.0), opts);
  CHECK(r.value < 1e-8);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) CHECK(squared_distance(r.H.row(i), r.H.row(j)) > 0.1);
  }
  CHECK(oracle::archetype_distance(s.H0, r.H) < 1e-6);
}

TEST_CASE("continuation produces a feasible factorization") {
  const SynthInstance s = synth_instance(15, 8, 3, 0.1, 0.2, 2);
  SaaConfig cfg;
  cfg.k = 3;
  cfg.ell = 12;
  cfg.lambda = {10, 3, 1};
  cfg.max_iter = 3000;
  ContinuationOptions opts;
  opts.outer.max_rounds = 3;
  const ContinuationResult r = continuation(s.X, cfg, opts);
  CHECK(r.traces.size() == 3);
  CHECK_NOTHROW(check_feasible(s.X, r.factors, 12));
}
