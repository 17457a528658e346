#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "saa/matrix.hpp"

namespace saa {

inline constexpr double kDefaultZeroTol = 1e-12;

// Products. Shapes are checked and mismatches throw InvalidInput.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);     // A B
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);  // A^T B
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);  // A B^T

double dot(std::span<const double> a, std::span<const double> b);
double squared_distance(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

double frobenius_inner(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_sq(const DenseMatrix& a);
double frobenius_norm(const DenseMatrix& a);
double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b);

std::vector<double> row_norms(const DenseMatrix& a);
std::vector<double> row_sums(const DenseMatrix& a);

/// Largest singular value by power iteration on the smaller Gram matrix
/// (A^T A or A A^T). The start vector is all-ones, normalized; if it lies in
/// the null space of the Gram matrix the iteration restarts once from a fixed
/// alternating-sign vector. Iteration stops when the Rayleigh quotient changes
/// by less than `tol` relative, or after `max_iter` steps.
double spectral_norm(const DenseMatrix& a, double tol = 1e-12, std::size_t max_iter = 10000);

std::size_t nnz(const DenseMatrix& a, double zero_tol = kDefaultZeroTol);

// Entries with |a_ij| > zero_tol, in row-major order.
std::vector<Coord> support(const DenseMatrix& a, double zero_tol = kDefaultZeroTol);

}  // namespace saa
