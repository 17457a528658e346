#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace saa {

/// Parameters of the penalized sparse archetypal problem and its solvers.
///
/// `lambda` holds either a single value or a strictly decreasing
/// continuation schedule; solvers that need one value use the last entry.
struct SaaConfig {
  std::size_t k = 0;
  std::size_t ell = 0;
  std::vector<double> lambda{1.0};
  double eps_safeguard = 1e-6;
  double tol_objective = 1e-8;
  double tol_stationary = 1e-6;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;

  double final_lambda() const { return lambda.back(); }

  // Throws InvalidInput on hard violations; returns advisory warnings.
  std::vector<std::string> validate(std::size_t n_features) const;
};

/// `n` values evenly spaced in log scale from `hi` down to `lo`.
std::vector<double> log_schedule(double hi, double lo, std::size_t n);

/// Accepts "0.5", "log:hi:lo:n", or a comma-separated list "30,10,1".
std::vector<double> parse_lambda_schedule(const std::string& text);

void to_json(nlohmann::json& j, const SaaConfig& cfg);
void from_json(const nlohmann::json& j, SaaConfig& cfg);

}  // namespace saa
