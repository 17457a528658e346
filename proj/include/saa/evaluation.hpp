#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "saa/matrix.hpp"

namespace saa {

// ---------------------------------------------------------------------------
// Synthetic data

struct SynthInstance {
  DenseMatrix X;   // max(X0 + Z, 0)
  DenseMatrix X0;  // W0 H0
  DenseMatrix H0;  // k x n, uniform [0,1] with a zeroed fraction
  DenseMatrix W0;  // m x k, row-stochastic
  DenseMatrix Z;   // Gaussian noise before clipping
};

/// H0 entries iid Unif[0,1] with round(zero_frac * k * n) of them zeroed at
/// random, W0 iid Unif[0,1] rows normalized to sum to one, X0 = W0 H0,
/// Z iid N(0, sigma_z^2), X = max(X0 + Z, 0). Deterministic in `seed`.
SynthInstance synth_instance(std::size_t m, std::size_t n, std::size_t k, double sigma_z, double zero_frac,
                             std::uint64_t seed);

/// As synth_instance with the k rows of H0 appended to the data (W0 gains the
/// matching identity rows), so the archetypes are themselves noiseless data
/// points. The result has m + k rows.
SynthInstance synth_separable_instance(std::size_t m, std::size_t n, std::size_t k, double sigma_z,
                                       double zero_frac, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Fixtures

struct RotatedLineFixture {
  DenseMatrix X_theta;
  DenseMatrix Z_theta;
  DenseMatrix H_theta;
  DenseMatrix H0;
  DenseMatrix X0;
};

/// Three collinear points in the plane rotated by theta about (1/2, 1/2);
/// H_theta is weakly but not strongly robust. theta must lie in (0, pi/4).
RotatedLineFixture rotated_line_fixture(double theta);

// Lower bound on L(H_theta, H0) in closed form.
double rotated_line_strong_lower_bound(double theta);

struct ToyTriangleFixture {
  DenseMatrix H0;  // 3 x 2 archetypes
  DenseMatrix H1;  // a larger enclosing triangle
  DenseMatrix H2;  // a 2-sparse enclosing triangle
  DenseMatrix W0;  // 53 x 3, last three rows the identity
  DenseMatrix X0;  // W0 H0: 50 random points plus the rows of H0
};

ToyTriangleFixture toy_triangle_fixture(std::uint64_t seed = 0, std::size_t points = 50);

// ---------------------------------------------------------------------------
// Robustness

struct RobustnessConstants {
  std::array<double, 10> c{};  // c[0] is c_1
  bool defined = false;        // false when H0 is rank deficient
};

RobustnessConstants robustness_constants(std::size_t m, std::size_t k, double kappa, double sigma_min);

struct PenalizedConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

PenalizedConstants penalized_constants(std::size_t m, std::size_t k, double kappa, double lambda);

struct RobustnessReport {
  double weak = 0.0;      // L(H0, H_hat)
  double strong = 0.0;    // L(H_hat, H0)
  double delta = 0.0;     // max_i ||Z_i||
  double beta = 0.0;      // sqrt(m) ||P_ell^perp(H0)||_F
  double alpha = 0.0;     // delta + beta
  double spread_b = 0.0;  // max pairwise distance of the rows of H0
  double sep = 0.0;       // D(H0, X0~)^{1/2}
  double tail = 0.0;      // ||P_ell^perp(H0)||_F

  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double kappa = 0.0;
  RobustnessConstants constants;

  // Weak and strong robustness bounds on L^{1/2} from the general constants.
  double general_weak_rhs = 0.0;
  bool general_weak_holds = false;
  double general_condition_lhs = 0.0;
  bool general_condition_holds = false;
  double general_strong_rhs = 0.0;
  bool general_strong_holds = false;  // only meaningful when the condition holds

  // Separable, ell-sparse specialization.
  bool separable_applicable = false;
  double separable_weak_rhs = 0.0;
  bool separable_weak_holds = false;
  double separable_condition_lhs = 0.0;
  bool separable_condition_holds = false;
  double separable_strong_rhs = 0.0;
  bool separable_strong_holds = false;

  // L(H0, H) <= 2 k b^2 + 2 L(H, H0)
  double weak_from_strong_rhs = 0.0;
  bool weak_from_strong_holds = false;

  // D(X0, H)^{1/2} <= sqrt(m) min{L(H0,H)^{1/2}, k ||H0||_F + L(H,H0)^{1/2}}
  double denoising_lhs = 0.0;
  double denoising_rhs = 0.0;
  bool denoising_holds = false;
};

/// Evaluates every robustness quantity and bound for an estimate `h_hat` of
/// `h0`, given noiseless data `x0`, noise `z` and sparsity budget `ell`.
RobustnessReport robustness_report(const DenseMatrix& h0, const DenseMatrix& h_hat, const DenseMatrix& x0,
                                   const DenseMatrix& z, std::size_t ell);

// Rows of X0 nearest to each row of H0.
DenseMatrix nearest_data_rows(const DenseMatrix& h0, const DenseMatrix& x0);

// The weak-from-strong and denoising inequalities on their own.
bool weak_from_strong_holds(const DenseMatrix& h0, const DenseMatrix& h, double rel_tol = 1e-12);
bool denoising_bound_holds(const DenseMatrix& h0, const DenseMatrix& h, const DenseMatrix& x0,
                           double rel_tol = 1e-9);

void to_json(nlohmann::json& j, const RobustnessReport& r);

// ---------------------------------------------------------------------------
// Clustering

// Index of the nearest row of H for every row of X; ties to the lowest index.
std::vector<std::size_t> cluster_assign(const DenseMatrix& x, const DenseMatrix& h);

struct ClusterMetrics {
  double purity = 0.0;
  double entropy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [estimated r][true u]
};

/// Labels are 0-based and must be < k.
ClusterMetrics cluster_metrics(const std::vector<std::size_t>& true_labels,
                               const std::vector<std::size_t>& est_labels, std::size_t k);

void to_json(nlohmann::json& j, const ClusterMetrics& c);

}  // namespace saa
