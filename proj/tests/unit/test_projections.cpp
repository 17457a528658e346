#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "saa/error.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"
#include "saa/random.hpp"

using namespace saa;

TEST_CASE("simplex projection matches the active-set oracle") {
  Rng rng(11);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int t = 0; t < 300; ++t) {
    std::vector<double> v(1 + rng() % 12);
    for (double& x : v) x = g(rng);
    const auto ref = oracle::simplex_active_set(v);
    std::vector<double> got = v;
    project_simplex(got);
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(got[i] - ref[i]) <= 1e-12);
      CHECK(got[i] >= 0.0);
      sum += got[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("simplex projection fixed points and edge cases") {
  std::vector<double> p{0.2, 0.3, 0.5};
  project_simplex(p);
  CHECK(p == std::vector<double>{0.2, 0.3, 0.5});
  std::vector<double> one{-7.0};
  project_simplex(one);
  CHECK(one[0] == 1.0);
  std::vector<double> tie{1.0, 1.0};
  project_simplex(tie);
  CHECK(tie[0] == doctest::Approx(0.5));
  std::vector<double> empty;
  CHECK_THROWS_AS(project_simplex(empty), InvalidInput);
}

TEST_CASE("hard thresholding keeps the largest magnitudes with row-major ties") {
  const DenseMatrix a = DenseMatrix::from_rows({{1, -5, 2}, {2, 0, 3}});
  const SparseProjection p = project_sparse(a, 3);
  CHECK(p.matrix == DenseMatrix::from_rows({{0, -5, 2}, {0, 0, 3}}));
  REQUIRE(p.pattern.kept.size() == 3);
  CHECK(p.pattern.kept[0] == Coord{0, 1});
  CHECK(p.pattern.kept[1] == Coord{0, 2});
  CHECK(p.pattern.kept[2] == Coord{1, 2});
  CHECK(nnz(project_sparse(a, 0).matrix) == 0);
  CHECK(project_sparse(a, 6).matrix == a);
  CHECK(project_sparse(a, 100).pattern.kept.size() == 5);  // zeros are never reported
  const DenseMatrix c = sparse_complement(a, 3);
  CHECK(c + p.matrix == a);
  CHECK(clamp_nonneg(a) == DenseMatrix::from_rows({{1, 0, 2}, {2, 0, 3}}));
}

TEST_CASE("hard thresholding is a Euclidean projection") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix a = random_normal(3, 4, rng);
    const std::size_t ell = rng() % 13;
    const DenseMatrix p = project_sparse(a, ell).matrix;
    std::vector<double> mags;
    for (double v : a.values()) mags.push_back(v * v);
    std::sort(mags.begin(), mags.end());
    const double dropped = std::accumulate(mags.begin(), mags.end() - static_cast<long>(std::min<std::size_t>(ell, 12)), 0.0);
    CHECK(frobenius_sq(a - p) == doctest::Approx(dropped).epsilon(1e-12));
  }
}
