#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/geometry.hpp"
#include "saa/linalg.hpp"
#include "saa/projections.hpp"

namespace saa {

namespace {

constexpr double kSqrt2p1 = 1.0 + 1.4142135623730951;

struct SingularRange {
  double min = 0.0;
  double max = 0.0;
};

SingularRange singular_range(const DenseMatrix& h) {
  Eigen::MatrixXd a(h.rows(), h.cols());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) a(i, j) = h(i, j);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  // Only k singular values matter: a k x n matrix with k > n is never full row rank.
  if (h.rows() > h.cols()) return {0.0, s.size() ? s(0) : 0.0};
  return {s(s.size() - 1), s(0)};
}

bool leq(double lhs, double rhs, double rel_tol) { return lhs <= rhs + rel_tol * std::max(1.0, std::abs(rhs)); }

// The hull distance comes from an iterative solver, so compare squares and
// allow its zero tolerance; a square root would amplify the residue.
bool denoising_leq(double hull_sq, double rhs, double rel_tol) {
  return hull_sq <= rhs * rhs + rel_tol * std::max(1.0, rhs * rhs) + kHullZeroTol;
}

}  // namespace

RobustnessConstants robustness_constants(std::size_t m_count, std::size_t k_count, double kappa, double sigma_min) {
  RobustnessConstants out;
  if (!(std::isfinite(kappa) && kappa >= 1.0 && sigma_min > 0.0)) return out;
  const double m = static_cast<double>(m_count), k = static_cast<double>(k_count);
  const double k32 = std::sqrt(k * k * k), m32 = std::sqrt(m * m * m), sk = std::sqrt(k);
  auto& c = out.c;
  c[0] = 4.0 * k32 * kappa * kappa + kSqrt2p1 * k32;
  c[1] = 4.0 * m * k * kappa + kSqrt2p1 * sk * (k + k32);
  c[2] = 2.0 * m32 * k * kappa + kSqrt2p1 * k * k;
  c[3] = k + 2.0 * k32 * kappa;
  c[4] = (k + k32) + 2.0 * m * k;
  c[5] = k32 + k * m32;
  c[6] = sigma_min / (6.0 * sk);
  c[7] = 7.0 * k * kappa + 2.0 * kSqrt2p1 * k * k * kappa;
  c[8] = 7.0 * kappa * (k + k32) + 2.0 * kSqrt2p1 * k32 * m;
  c[9] = 7.0 * kappa * k32 + kSqrt2p1 * k32 * m32;
  out.defined = true;
  return out;
}

PenalizedConstants penalized_constants(std::size_t m_count, std::size_t k_count, double kappa, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidInput("penalized_constants: lambda must be positive");
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InvalidInput("penalized_constants: kappa must be >= 1");
  const double m = static_cast<double>(m_count), k = static_cast<double>(k_count);
  const double a = k * std::sqrt(m) * std::sqrt(m + lambda * k * k) + m * k;
  const double b = std::sqrt(m * k / lambda + k * k * k) + k;
  PenalizedConstants out;
  out.c1 = 2.0 * kappa * a + kSqrt2p1 * std::sqrt(k) * b;
  out.c2 = 7.0 * kappa * b + kSqrt2p1 * std::sqrt(k) * a;
  out.c3 = (1.0 + m) * k + k * std::sqrt(m) * std::sqrt(m + lambda * k * k) + std::sqrt(m * k / lambda + k * k * k);
  return out;
}

DenseMatrix nearest_data_rows(const DenseMatrix& h0, const DenseMatrix& x0) {
  if (h0.cols() != x0.cols() || x0.rows() == 0) throw InvalidInput("nearest_data_rows: shape mismatch");
  const ArchetypeDistance d = archetype_distance(h0, x0);
  DenseMatrix out(h0.rows(), h0.cols());
  for (std::size_t i = 0; i < h0.rows(); ++i) {
    const auto src = x0.row(d.nearest[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

bool weak_from_strong_holds(const DenseMatrix& h0, const DenseMatrix& h, double rel_tol) {
  const double b = archetype_spread(h0);
  const double rhs = 2.0 * static_cast<double>(h0.rows()) * b * b + 2.0 * archetype_distance(h, h0).value;
  return leq(archetype_distance(h0, h).value, rhs, rel_tol);
}

bool denoising_bound_holds(const DenseMatrix& h0, const DenseMatrix& h, const DenseMatrix& x0, double rel_tol) {
  const double m = static_cast<double>(x0.rows());
  const double rhs = std::sqrt(m) * std::min(std::sqrt(archetype_distance(h0, h).value),
                                             static_cast<double>(h0.rows()) * frobenius_norm(h0) +
                                                 std::sqrt(archetype_distance(h, h0).value));
  return denoising_leq(set_hull_distance(x0, h), rhs, rel_tol);
}

RobustnessReport robustness_report(const DenseMatrix& h0, const DenseMatrix& h_hat, const DenseMatrix& x0,
                                   const DenseMatrix& z, std::size_t ell) {
  if (h0.empty() || h_hat.empty() || x0.empty()) throw InvalidInput("robustness_report: empty input");
  if (h_hat.cols() != h0.cols() || x0.cols() != h0.cols()) throw InvalidInput("robustness_report: column mismatch");
  if (z.rows() != x0.rows() || z.cols() != x0.cols()) throw InvalidInput("robustness_report: Z must match X0");
  constexpr double tol = 1e-9;

  RobustnessReport r;
  const std::size_t m = x0.rows(), k = h0.rows();
  const double md = static_cast<double>(m), kd = static_cast<double>(k);
  r.weak = archetype_distance(h0, h_hat).value;
  r.strong = archetype_distance(h_hat, h0).value;
  for (double v : row_norms(z)) r.delta = std::max(r.delta, v);
  r.tail = frobenius_norm(sparse_complement(h0, ell));
  r.beta = std::sqrt(md) * r.tail;
  r.alpha = r.delta + r.beta;
  r.spread_b = archetype_spread(h0);
  r.sep = std::sqrt(set_hull_distance(h0, nearest_data_rows(h0, x0)));

  const SingularRange sv = singular_range(h0);
  r.sigma_min = sv.min;
  r.sigma_max = sv.max;
  const bool full_rank = sv.min > 1e-12 * std::max(sv.max, 1.0);
  r.kappa = full_rank ? sv.max / sv.min : std::numeric_limits<double>::infinity();
  r.constants = robustness_constants(m, k, r.kappa, r.sigma_min);

  const double weak_root = std::sqrt(r.weak), strong_root = std::sqrt(r.strong);
  if (r.constants.defined) {
    const auto& c = r.constants.c;
    r.general_weak_rhs = c[0] * r.sep + c[1] * r.delta + c[2] * r.tail;
    r.general_weak_holds = leq(weak_root, r.general_weak_rhs, tol);
    r.general_condition_lhs = c[3] * r.sep + c[4] * r.delta + c[5] * r.tail;
    r.general_condition_holds = r.general_condition_lhs <= c[6];
    r.general_strong_rhs = c[7] * r.sep + c[8] * r.delta + c[9] * r.tail;
    r.general_strong_holds = leq(strong_root, r.general_strong_rhs, tol);

    r.separable_applicable = r.tail == 0.0 && r.sep <= 1e-6;
    if (r.separable_applicable) {
      r.separable_weak_rhs = c[1] * r.delta;
      r.separable_weak_holds = leq(weak_root, r.separable_weak_rhs, tol);
      r.separable_condition_lhs = c[4] * r.delta;
      r.separable_condition_holds = r.separable_condition_lhs <= c[6];
      r.separable_strong_rhs = c[8] * r.delta;
      r.separable_strong_holds = leq(strong_root, r.separable_strong_rhs, tol);
    }
  }

  r.weak_from_strong_rhs = 2.0 * kd * r.spread_b * r.spread_b + 2.0 * r.strong;
  r.weak_from_strong_holds = leq(r.weak, r.weak_from_strong_rhs, 1e-12);

  const double hull_sq = set_hull_distance(x0, h_hat);
  r.denoising_lhs = std::sqrt(hull_sq);
  r.denoising_rhs = std::sqrt(md) * std::min(weak_root, kd * frobenius_norm(h0) + strong_root);
  r.denoising_holds = denoising_leq(hull_sq, r.denoising_rhs, tol);
  return r;
}

void to_json(nlohmann::json& j, const RobustnessReport& r) {
  j = nlohmann::json{{"weak", r.weak},
                     {"strong", r.strong},
                     {"delta", r.delta},
                     {"beta", r.beta},
                     {"alpha", r.alpha},
                     {"spread_b", r.spread_b},
                     {"sep", r.sep},
                     {"tail", r.tail},
                     {"sigma_min", r.sigma_min},
                     {"sigma_max", r.sigma_max},
                     {"constants_defined", r.constants.defined}};
  // JSON has no infinity.
  j["kappa"] = std::isfinite(r.kappa) ? nlohmann::json(r.kappa) : nlohmann::json(nullptr);
  if (r.constants.defined) {
    j["constants"] = std::vector<double>(r.constants.c.begin(), r.constants.c.end());
    j["general_bound"] = {{"weak_rhs", r.general_weak_rhs},
                 {"weak_holds", r.general_weak_holds},
                 {"condition_lhs", r.general_condition_lhs},
                 {"condition_holds", r.general_condition_holds},
                 {"strong_rhs", r.general_strong_rhs},
                 {"strong_holds", r.general_strong_holds}};
  } else {
    j["constants"] = nullptr;
    j["general_bound"] = nullptr;
  }
  if (r.separable_applicable) {
    j["separable_bound"] = {{"weak_rhs", r.separable_weak_rhs},
                 {"weak_holds", r.separable_weak_holds},
                 {"condition_lhs", r.separable_condition_lhs},
                 {"condition_holds", r.separable_condition_holds},
                 {"strong_rhs", r.separable_strong_rhs},
                 {"strong_holds", r.separable_strong_holds}};
  } else {
    j["separable_bound"] = nullptr;
  }
  j["weak_from_strong"] = {{"rhs", r.weak_from_strong_rhs}, {"holds", r.weak_from_strong_holds}};
  j["denoising"] = {{"lhs", r.denoising_lhs}, {"rhs", r.denoising_rhs}, {"holds", r.denoising_holds}};
}

}  // namespace saa
