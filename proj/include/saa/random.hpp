#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "saa/matrix.hpp"

namespace saa {

using Rng = std::mt19937_64;

// Independent per-stream seed derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

DenseMatrix random_uniform(std::size_t rows, std::size_t cols, Rng& rng, double lo = 0.0, double hi = 1.0);
DenseMatrix random_normal(std::size_t rows, std::size_t cols, Rng& rng, double sigma = 1.0);

// Uniform [0,1] entries, each row rescaled to sum to one.
DenseMatrix random_row_stochastic(std::size_t rows, std::size_t cols, Rng& rng);

// Every entry 1/cols.
DenseMatrix uniform_row_stochastic(std::size_t rows, std::size_t cols);

}  // namespace saa
