#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "saa/config.hpp"
#include "saa/matrix.hpp"

namespace saa {

/// Solver state: archetypes H (k x n), data weights W (m x k) and archetype
/// weights Wt (k x m). W and Wt are row-stochastic, H is nonnegative with at
/// most ell nonzeros.
struct Factorization {
  DenseMatrix H;
  DenseMatrix W;
  DenseMatrix Wt;
};

inline constexpr double kRowSumTol = 1e-9;

// Throws InvalidInput naming the first violated invariant.
void check_feasible(const DenseMatrix& x, const Factorization& fac, std::size_t ell);

// W, Wt uniform rows; H = P_ell(max(Wt X, 0)).
Factorization default_initialization(const DenseMatrix& x, std::size_t k, std::size_t ell);

// H = 0; W and Wt random row-stochastic drawn from `seed`.
Factorization zero_initialization(const DenseMatrix& x, std::size_t k, std::uint64_t seed);

struct ObjectiveBreakdown {
  double fit = 0.0;    // ||X - W H||_F^2
  double reg = 0.0;    // ||H - Wt X||_F^2
  double total = 0.0;  // fit + lambda * reg
};

ObjectiveBreakdown objective(const DenseMatrix& x, const Factorization& fac, double lambda);

// Full gradients of the objective with respect to each block.
DenseMatrix gradient_H(const DenseMatrix& x, const Factorization& fac, double lambda);
DenseMatrix gradient_W(const DenseMatrix& x, const Factorization& fac);
DenseMatrix gradient_Wt(const DenseMatrix& x, const Factorization& fac, double lambda);

struct LipschitzConstants {
  double l1 = 0.0;  // H block: 2 (lambda + sigma_max(W)^2)
  double l2 = 0.0;  // W block: 2 max(sigma_max(H)^2, eps)
  double l3 = 0.0;  // Wt block: 2 lambda sigma_max(X)^2
};

LipschitzConstants lipschitz_constants(const DenseMatrix& w, const DenseMatrix& h, const DenseMatrix& x,
                                       double lambda, double eps);

/// H <- P_ell(max(H - grad_H / (2 L1(W)), 0)).
DenseMatrix step_H(const DenseMatrix& x, const Factorization& fac, double lambda, std::size_t ell);

/// W <- P_simplex(W - grad_W / (2 L2(H))), a descent step.
DenseMatrix step_W(const DenseMatrix& x, const Factorization& fac, double eps);

/// Wt <- P_simplex(Wt - grad_Wt / (2 L3(X))). With lambda = 0 the block is
/// vacuous and Wt is returned unchanged. `sigma_x` may pass a cached
/// sigma_max(X); negative means compute it.
DenseMatrix step_Wt(const DenseMatrix& x, const Factorization& fac, double lambda, double sigma_x = -1.0);

struct StepSizes {
  double h = 0.0;
  double w = 0.0;
  double wt = 0.0;
};

struct SolveTrace {
  std::vector<double> objectives;  // total at the start and after every sweep
  std::vector<double> fits;
  std::vector<double> regs;
  std::vector<StepSizes> step_sizes;  // 1/(2 L) per block, per sweep
  std::size_t iterations = 0;
  bool converged = false;
  double stationarity_residual = 0.0;
  bool boundary_tie = false;
};

struct SolveResult {
  Factorization factors;
  SolveTrace trace;
};

/// Block proximal-gradient descent over (H, W, Wt) at a fixed lambda.
///
/// Each sweep updates H, then W, then Wt. A sweep started from a point is
/// exactly the stationarity test of that point, so the solver stops at the
/// first iterate whose sweep moves every block by less than tol_stationary
/// (Frobenius) while also decreasing the objective by less than
/// tol_objective (relative), and returns that iterate. Otherwise it stops at
/// max_iter with converged = false and returns the last iterate.
SolveResult solve(const DenseMatrix& x, const Factorization& init, const SaaConfig& cfg, double lambda);

// Uses cfg.final_lambda().
SolveResult solve(const DenseMatrix& x, const Factorization& init, const SaaConfig& cfg);

struct StationarityReport {
  double residual = 0.0;  // max Frobenius change over the three blocks after one sweep
  double dh = 0.0;
  double dw = 0.0;
  double dwt = 0.0;
  std::size_t t_nnz = 0;        // nonzeros of T = max(0, H - grad_H / (2 L1))
  double boundary_gap = 0.0;    // T#_ell - T#_{ell+1}, sorted descending; 0 if ||T||_0 <= ell
  bool boundary_tie = false;    // P_ell(T) not unique
};

StationarityReport stationarity_residual(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg,
                                         double lambda);
StationarityReport stationarity_residual(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg);

// CSV with header iteration,fit,reg,total.
void write_trace_csv(const std::filesystem::path& path, const SolveTrace& trace);

}  // namespace saa
