#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"
#include "saa/bcd.hpp"
#include "saa/config.hpp"
#include "saa/matrix.hpp"

namespace saa {

// Binary k x n support pattern, flattened row-major.
using Pattern = std::vector<std::uint8_t>;

Pattern pattern_of(const DenseMatrix& h, double zero_tol = 0.0);
DenseMatrix pattern_matrix(const Pattern& z, std::size_t k, std::size_t n);

/// b = k (max_u ||X_u|| + sqrt(k) min_u ||X_u||)^2, an upper bound on
/// ||H*||_F^2 for the large-lambda problem; sqrt(b) bounds every entry.
double norm_bound_b(const DenseMatrix& x, std::size_t k);

struct EvalOptions {
  double tol = 1e-10;
  std::size_t max_iter = 20000;
};

struct FEvaluation {
  double value = 0.0;
  DenseMatrix H;   // k x n, 0 <= H <= sqrt(b) Z
  DenseMatrix Wt;  // k x m, row-stochastic
  std::size_t iterations = 0;
  bool converged = false;
};

/// F(Z) = min ||H - Wt X||_F^2 over 0 <= H <= sqrt(b) Z and row-stochastic Wt.
///
/// `z` may be fractional in [0,1] (relaxed patterns); binary patterns must
/// have at most `ell` ones. Solved by accelerated projected gradient on the
/// joint (H, Wt) block with step 1/L, L = 2 (1 + sigma_max(X)^2); H is then
/// set to its exact minimizer clip(Wt X, 0, sqrt(b) Z).
/// `warm_wt` optionally seeds Wt (uniform rows otherwise).
FEvaluation eval_F(const DenseMatrix& z, const DenseMatrix& x, std::size_t ell, double b,
                   const EvalOptions& opts = {}, const DenseMatrix* warm_wt = nullptr);
FEvaluation eval_F(const Pattern& z, const DenseMatrix& x, std::size_t k, std::size_t ell, double b,
                   const EvalOptions& opts = {}, const DenseMatrix* warm_wt = nullptr);

/// G = -sqrt(b) Lambda with Lambda = 2 max(Wt* X - H*, 0): a subgradient of F
/// at the pattern that produced (H*, Wt*). Entries are <= 0.
DenseMatrix subgradient_F(const DenseMatrix& h_star, const DenseMatrix& wt_star, const DenseMatrix& x, double b);

// ---------------------------------------------------------------------------
// Cutting planes

/// Linearization F(Z) >= value + <grad, Z - pattern>, valid for all Z.
struct Cut {
  Pattern pattern;
  double value = 0.0;
  DenseMatrix grad;  // k x n

  // value - <grad, pattern>
  double intercept() const;
  double evaluate(const Pattern& z) const;
};

struct RoundRecord {
  Pattern pattern;    // pattern evaluated this round
  double value = 0.0; // F at that pattern
  double lower = 0.0; // best lower bound after the round
  double upper = 0.0; // best upper bound after the round
  double gap = 0.0;
};

struct CutSet {
  std::size_t k = 0;
  std::size_t n = 0;
  std::vector<Cut> cuts;
  double best_upper = 0.0;
  double best_lower = 0.0;
  double gap = 0.0;
  std::vector<RoundRecord> rounds;

  // max over cuts at z
  double model(const Pattern& z) const;
};

// (UB - LB) / UB, or 0 when UB <= max(LB, 0).
double optimality_gap(double upper, double lower);

nlohmann::json to_json(const CutSet& cuts);
CutSet cutset_from_json(const nlohmann::json& j);

struct MilpOptions {
  std::size_t node_limit = 200000;
  double time_limit_seconds = 0.0;  // 0: unlimited
};

struct MilpResult {
  Pattern z;
  double eta = 0.0;          // model value at z
  double lower_bound = 0.0;  // valid bound on the MILP optimum; == eta when optimal
  bool optimal = false;
  std::size_t nodes = 0;
};

/// Backend interface for min eta s.t. eta >= cut_i(Z), sum Z <= ell, Z binary.
class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual MilpResult solve(const CutSet& cuts, std::size_t ell) = 0;
};

/// Depth-first branch and bound over the k*n binaries.
///
/// Node bound: the maximum over cuts of each cut's own minimum over the free
/// variables under the remaining budget (a greedy pick of its most negative
/// coefficients). Branching variable: the free variable with the largest
/// |sum of cut coefficients| among those some but not all cuts' greedy
/// completions select. The one-branch of that variable is explored first.
/// Among equal-valued solutions the lexicographically smaller pattern is kept
/// when both are visited.
class BranchAndBound : public MilpBackend {
 public:
  explicit BranchAndBound(MilpOptions opts = {}) : opts_(opts) {}
  MilpResult solve(const CutSet& cuts, std::size_t ell) override;

 private:
  MilpOptions opts_;
};

MilpResult milp_min_cuts(const CutSet& cuts, std::size_t ell, const MilpOptions& opts = {});

// ---------------------------------------------------------------------------
// Outer approximation

enum class StartPattern { kUniform, kRandom, kFurthestSum };

struct OuterApproxOptions {
  double tol_gap = 1e-4;
  StartPattern start = StartPattern::kFurthestSum;
  std::uint64_t seed = 0;  // used by StartPattern::kRandom
  std::size_t max_rounds = 50;
  double time_budget_seconds = 0.0;  // 0: unlimited
  EvalOptions eval;
  MilpOptions milp;
};

struct OuterApproxResult {
  Pattern z;
  DenseMatrix H;
  DenseMatrix Wt;
  double value = 0.0;
  CutSet cuts;
  std::size_t rounds = 0;
  bool stalled = false;  // MILP returned an already evaluated pattern without closing the gap
};

/// Z0 is the pattern of P_ell(max(Wt0 X, 0)) for a start matrix Wt0:
///   kUniform      every row 1/m. All k pattern rows coincide, and so do the
///                 resulting archetypes.
///   kRandom       rows drawn uniformly and normalized, from `seed`.
///   kFurthestSum  row i selects data point u_i: u_0 is farthest from the
///                 data mean, each next point maximizes the summed distance to
///                 the points already chosen. Deterministic.
Pattern initial_pattern(const DenseMatrix& x, std::size_t k, std::size_t ell,
                        StartPattern start = StartPattern::kUniform, std::uint64_t seed = 0);

// The start matrix Wt0 behind initial_pattern; it also seeds the first F evaluation.
DenseMatrix initial_weights(const DenseMatrix& x, std::size_t k, StartPattern start = StartPattern::kUniform,
                            std::uint64_t seed = 0);

// Indices of the data rows chosen by the furthest-sum rule (at most k, distinct).
std::vector<std::size_t> furthest_sum_rows(const DenseMatrix& x, std::size_t k);

/// Minimizes F over binary patterns with at most ell ones by alternating
/// F evaluations, subgradient cuts and the cut MILP until the relative gap
/// falls to tol_gap, max_rounds is reached, or the MILP stalls.
OuterApproxResult outer_approximation(const DenseMatrix& x, std::size_t k, std::size_t ell,
                                      const OuterApproxOptions& opts = {}, MilpBackend* backend = nullptr);

// ---------------------------------------------------------------------------
// Continuation

struct ContinuationOptions {
  OuterApproxOptions outer;
  // Iteration cap for every schedule value except the last; 0 means cfg.max_iter.
  std::size_t intermediate_max_iter = 0;
};

struct ContinuationResult {
  Factorization factors;
  OuterApproxResult init;
  std::vector<SolveTrace> traces;  // one per schedule value
};

/// Outer-approximation start (H = H*, Wt = Wt*, W uniform followed by one
/// W step), then warm-started block descent along cfg.lambda in order.
ContinuationResult continuation(const DenseMatrix& x, const SaaConfig& cfg, const ContinuationOptions& opts = {});

}  // namespace saa
