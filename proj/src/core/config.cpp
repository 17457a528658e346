#include "saa/config.hpp"

#include <cmath>
#include <sstream>

#include "saa/error.hpp"

namespace saa {

std::vector<std::string> SaaConfig::validate(std::size_t n_features) const {
  if (k == 0) throw InvalidInput("k must be positive");
  if (ell == 0 || ell > k * n_features) {
    throw InvalidInput("ell must satisfy 0 < ell <= k*n (got " + std::to_string(ell) + ")");
  }
  if (lambda.empty()) throw InvalidInput("lambda schedule is empty");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!std::isfinite(lambda[i]) || lambda[i] < 0.0) throw InvalidInput("lambda must be finite and >= 0");
    if (i > 0 && !(lambda[i] < lambda[i - 1])) {
      throw InvalidInput("lambda schedule must be strictly decreasing");
    }
  }
  if (!(eps_safeguard > 0.0)) throw InvalidInput("eps_safeguard must be positive");
  if (!(tol_objective >= 0.0) || !(tol_stationary >= 0.0)) throw InvalidInput("tolerances must be >= 0");

  std::vector<std::string> warnings;
  if (ell < k) {
    warnings.push_back("ell < k: at least " + std::to_string(k - ell) + " archetype rows are forced to zero");
  }
  return warnings;
}

std::vector<double> log_schedule(double hi, double lo, std::size_t n) {
  if (n == 0) throw InvalidInput("log schedule needs at least one value");
  if (!(hi > 0.0) || !(lo > 0.0)) throw InvalidInput("log schedule endpoints must be positive");
  if (n == 1) return {lo};
  if (!(hi > lo)) throw InvalidInput("log schedule needs hi > lo");
  std::vector<double> out(n);
  const double a = std::log(hi), b = std::log(lo);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = hi;
  out.back() = lo;
  return out;
}

std::vector<double> parse_lambda_schedule(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidInput("bad lambda value '" + s + "'");
    }
    if (used != s.size()) throw InvalidInput("bad lambda value '" + s + "'");
    return v;
  };

  if (text.rfind("log:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(text.substr(4));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw InvalidInput("expected log:hi:lo:n, got '" + text + "'");
    const double n = to_double(parts[2]);
    if (n < 1 || n != std::floor(n)) throw InvalidInput("log schedule count must be a positive integer");
    return log_schedule(to_double(parts[0]), to_double(parts[1]), static_cast<std::size_t>(n));
  }

  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  if (out.empty()) throw InvalidInput("empty lambda schedule");
  return out;
}

void to_json(nlohmann::json& j, const SaaConfig& cfg) {
  j = nlohmann::json{{"k", cfg.k},
                     {"ell", cfg.ell},
                     {"lambda", cfg.lambda},
                     {"eps_safeguard", cfg.eps_safeguard},
                     {"tol_objective", cfg.tol_objective},
                     {"tol_stationary", cfg.tol_stationary},
                     {"max_iter", cfg.max_iter},
                     {"seed", cfg.seed}};
}

void from_json(const nlohmann::json& j, SaaConfig& cfg) {
  cfg.k = j.value("k", cfg.k);
  cfg.ell = j.value("ell", cfg.ell);
  if (j.contains("lambda")) {
    const auto& l = j.at("lambda");
    if (l.is_number()) {
      cfg.lambda = {l.get<double>()};
    } else if (l.is_string()) {
      cfg.lambda = parse_lambda_schedule(l.get<std::string>());
    } else {
      cfg.lambda = l.get<std::vector<double>>();
    }
  }
  cfg.eps_safeguard = j.value("eps_safeguard", cfg.eps_safeguard);
  cfg.tol_objective = j.value("tol_objective", cfg.tol_objective);
  cfg.tol_stationary = j.value("tol_stationary", cfg.tol_stationary);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  cfg.seed = j.value("seed", cfg.seed);
}

}  // namespace saa
