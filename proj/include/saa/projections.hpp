#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "saa/matrix.hpp"

namespace saa {

// Coordinates retained by the hard-thresholding operator.
struct SparsityPattern {
  std::vector<Coord> kept;  // row-major order
  std::size_t budget = 0;
};

struct SparseProjection {
  DenseMatrix matrix;
  SparsityPattern pattern;
};

/// Euclidean projection of `v` onto {x >= 0, sum x = 1}, in place.
/// Sort-and-threshold water filling, O(d log d).
void project_simplex(std::span<double> v);

DenseMatrix project_simplex_rows(const DenseMatrix& a);

/// Global top-`ell` hard thresholding over all entries of `a`.
///
/// Keeps the `ell` entries of largest magnitude and zeroes the rest. Ties are
/// broken in row-major order: the earlier index is kept. Zero entries are never
/// reported in the pattern.
SparseProjection project_sparse(const DenseMatrix& a, std::size_t ell);

// a - project_sparse(a, ell).matrix
DenseMatrix sparse_complement(const DenseMatrix& a, std::size_t ell);

DenseMatrix clamp_nonneg(const DenseMatrix& a);

}  // namespace saa
