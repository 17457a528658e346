#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "saa/apg.hpp"
#include "saa/bcd.hpp"
#include "saa/config.hpp"
#include "saa/matrix.hpp"

namespace saa {

// Smallest nonzero entry of H; ties go to the earlier row-major coordinate.
Coord select_leaving(const DenseMatrix& h);

// Off-support coordinate with the most negative partial derivative of the
// objective in H. No sign condition is imposed.
Coord select_entering(const DenseMatrix& x, const Factorization& fac, double lambda);

struct OptimalT {
  double t = 0.0;
  bool degenerate = false;  // lambda + ||W_{.,i2}||^2 == 0
};

/// Exact minimizer over t >= 0 of
///   ||X - W (H + t E) ||_F^2 + lambda ||H + t E - Wt X||_F^2
/// where E is the unit matrix at `entering` and H is zero there.
OptimalT optimal_t(const DenseMatrix& x, const DenseMatrix& h_minus, const DenseMatrix& w, const DenseMatrix& wt,
                   double lambda, Coord entering);

struct RefitOptions {
  double tol = 1e-9;              // relative decrease between alternations
  std::size_t max_iter = 5000;    // alternations
  ApgOptions inner{1e-10, 500, 0.0};
};

struct RefitResult {
  Factorization factors;  // H = H_minus + t E
  double t = 0.0;
  double objective = 0.0;
  std::vector<double> objectives;  // after every alternation, starting point first
  std::size_t alternations = 0;
  std::size_t inner_iterations = 0;
};

/// Alternates W (fit term, simplex rows), Wt (archetypal term, simplex rows)
/// and the closed-form t, starting from the (W, Wt) in `fac`, whose H must be
/// zero at `entering`. A given `fixed_t` pins t and only W and Wt are refit.
RefitResult swap_refit(const DenseMatrix& x, const Factorization& fac, double lambda, Coord entering,
                       const RefitOptions& opts = {}, std::optional<double> fixed_t = std::nullopt);

struct SwapProposal {
  std::optional<Coord> leaving;  // absent when ||H||_0 < ell
  Coord entering;
  double t_star = 0.0;
  double old_objective = 0.0;
  double new_objective = 0.0;
  bool accepted = false;
};

struct LocalSearchOptions {
  std::size_t max_swaps = 100;
  RefitOptions refit;
};

struct LocalSearchResult {
  Factorization factors;
  std::size_t swaps_accepted = 0;
  std::vector<SwapProposal> proposals;  // accepted ones followed by the final rejected one, if any
  double objective = 0.0;
};

/// One proposal per state: the smallest entry leaves (only when the support
/// is full), the most negative off-support derivative enters, and the swap is
/// kept if the refit strictly lowers the objective. Stops at the first
/// rejection or after max_swaps proposals.
LocalSearchResult local_search(const DenseMatrix& x, const Factorization& fac, const SaaConfig& cfg,
                               const LocalSearchOptions& opts = {});

// CSV with header leaving_row,leaving_col,entering_row,entering_col,t,delta,accepted.
void write_swap_log_csv(const std::filesystem::path& path, const std::vector<SwapProposal>& log);

}  // namespace saa
