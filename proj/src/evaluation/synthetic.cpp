#include <algorithm>
#include <cmath>
#include <numeric>

#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/linalg.hpp"
#include "saa/random.hpp"

namespace saa {

SynthInstance synth_instance(std::size_t m, std::size_t n, std::size_t k, double sigma_z, double zero_frac,
                             std::uint64_t seed) {
  if (m == 0 || n == 0 || k == 0) throw InvalidInput("synth_instance: m, n, k must be positive");
  if (!(zero_frac >= 0.0 && zero_frac < 1.0)) throw InvalidInput("synth_instance: zero_frac must be in [0,1)");
  if (!(sigma_z >= 0.0)) throw InvalidInput("synth_instance: sigma_z must be >= 0");

  Rng rng(seed);
  SynthInstance s;
  s.H0 = random_uniform(k, n, rng);
  std::vector<std::size_t> idx(k * n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  const auto zeros = static_cast<std::size_t>(std::llround(zero_frac * static_cast<double>(k * n)));
  auto hv = s.H0.values();
  for (std::size_t i = 0; i < zeros; ++i) hv[idx[i]] = 0.0;

  s.W0 = random_row_stochastic(m, k, rng);
  s.X0 = matmul(s.W0, s.H0);
  s.Z = random_normal(m, n, rng, sigma_z);
  s.X = s.X0 + s.Z;
  for (double& v : s.X.values()) v = std::max(v, 0.0);
  return s;
}

SynthInstance synth_separable_instance(std::size_t m, std::size_t n, std::size_t k, double sigma_z,
                                       double zero_frac, std::uint64_t seed) {
  SynthInstance base = synth_instance(m, n, k, sigma_z, zero_frac, seed);
  Rng rng(derive_seed(seed, 1));
  const DenseMatrix extra_noise = random_normal(k, n, rng, sigma_z);

  SynthInstance s;
  s.H0 = base.H0;
  s.W0 = base.W0;
  s.X0 = base.X0;
  s.Z = base.Z;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> e(k, 0.0);
    e[i] = 1.0;
    s.W0 = s.W0.with_row_appended(e);
    s.X0 = s.X0.with_row_appended(base.H0.row(i));
    s.Z = s.Z.with_row_appended(extra_noise.row(i));
  }
  s.X = s.X0 + s.Z;
  for (double& v : s.X.values()) v = std::max(v, 0.0);
  return s;
}

}  // namespace saa
