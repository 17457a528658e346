#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

std::vector<double> simplex_active_set(const std::vector<double>& v) {
  const std::size_t d = v.size();
  std::vector<bool> active(d, true);
  std::vector<double> x(d, 0.0);
  for (;;) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < d; ++i) {
      if (active[i]) {
        sum += v[i];
        ++count;
      }
    }
    const double shift = (sum - 1.0) / static_cast<double>(count);
    bool removed = false;
    for (std::size_t i = 0; i < d; ++i) {
      if (!active[i]) {
        x[i] = 0.0;
        continue;
      }
      x[i] = v[i] - shift;
      if (x[i] < 0.0) {
        active[i] = false;
        removed = true;
      }
    }
    if (!removed) break;
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!active[i]) x[i] = 0.0;
  }
  return x;
}

double hull_sq_distance_enum(const std::vector<double>& x, const DenseMatrix& v) {
  const std::size_t r = v.rows(), n = v.cols();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t mask = 1; mask < (std::size_t{1} << r); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < r; ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    const std::size_t q = s.size();
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(q + 1, q + 1);
    Eigen::VectorXd rhs(q + 1);
    for (std::size_t a = 0; a < q; ++a) {
      double vx = 0.0;
      for (std::size_t j = 0; j < n; ++j) vx += v(s[a], j) * x[j];
      rhs(a) = 2.0 * vx;
      for (std::size_t b = 0; b < q; ++b) {
        double g = 0.0;
        for (std::size_t j = 0; j < n; ++j) g += v(s[a], j) * v(s[b], j);
        kkt(a, b) = 2.0 * g;
      }
      kkt(a, q) = 1.0;
      kkt(q, a) = 1.0;
    }
    rhs(q) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    lu.setThreshold(1e-11);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd sol = lu.solve(rhs);
    bool feasible = true;
    for (std::size_t a = 0; a < q; ++a) feasible = feasible && sol(a) >= -1e-12;
    if (!feasible) continue;
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double p = 0.0;
      for (std::size_t a = 0; a < q; ++a) p += std::max(sol(a), 0.0) * v(s[a], j);
      d += (x[j] - p) * (x[j] - p);
    }
    best = std::min(best, d);
  }
  return best;
}

double set_hull_distance_enum(const DenseMatrix& x, const DenseMatrix& v) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = x.row(i);
    total += hull_sq_distance_enum(std::vector<double>(r.begin(), r.end()), v);
  }
  return total;
}

double archetype_distance(const DenseMatrix& a, const DenseMatrix& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < a.cols(); ++c) d += (a(i, c) - b(j, c)) * (a(i, c) - b(j, c));
      best = std::min(best, d);
    }
    total += best;
  }
  return total;
}

double spread(const DenseMatrix& h) {
  double best = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.rows(); ++j) {
      double d = 0.0;
      for (std::size_t c = 0; c < h.cols(); ++c) d += (h(i, c) - h(j, c)) * (h(i, c) - h(j, c));
      best = std::max(best, std::sqrt(d));
    }
  }
  return best;
}

std::vector<saa::Pattern> patterns_up_to(std::size_t d, std::size_t ell) {
  std::vector<saa::Pattern> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > ell) continue;
    saa::Pattern z(d, 0);
    for (std::size_t i = 0; i < d; ++i) z[i] = mask >> i & 1;
    out.push_back(z);
  }
  return out;
}

MilpOptimum milp_enumerate(const saa::CutSet& cuts, std::size_t ell) {
  MilpOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  for (const saa::Pattern& z : patterns_up_to(cuts.k * cuts.n, ell)) {
    double v = -std::numeric_limits<double>::infinity();
    for (const saa::Cut& c : cuts.cuts) {
      double s = c.value;
      for (std::size_t i = 0; i < z.size(); ++i) {
        s += c.grad.values()[i] * (static_cast<double>(z[i]) - static_cast<double>(c.pattern[i]));
      }
      v = std::max(v, s);
    }
    if (v < best.value - 1e-12 * std::max(1.0, std::abs(v))) {
      best.value = v;
      best.argmins = {z};
    } else if (std::abs(v - best.value) <= 1e-12 * std::max(1.0, std::abs(v))) {
      best.argmins.push_back(z);
    }
  }
  return best;
}

namespace {

double row_residual(const std::vector<double>& w, const DenseMatrix& x, const std::vector<double>& upper,
                    std::vector<double>* grad) {
  const std::size_t m = x.rows(), n = x.cols();
  std::vector<double> r(n, 0.0);
  double val = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double y = 0.0;
    for (std::size_t u = 0; u < m; ++u) y += w[u] * x(u, j);
    r[j] = y - std::clamp(y, 0.0, upper[j]);
    val += r[j] * r[j];
  }
  if (grad) {
    grad->assign(m, 0.0);
    for (std::size_t u = 0; u < m; ++u) {
      for (std::size_t j = 0; j < n; ++j) (*grad)[u] += 2.0 * r[j] * x(u, j);
    }
  }
  return val;
}

}  // namespace

double f_value(const saa::Pattern& z, const DenseMatrix& x, std::size_t k, double b) {
  const std::size_t m = x.rows(), n = x.cols();
  Eigen::MatrixXd xe(m, n);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t j = 0; j < n; ++j) xe(u, j) = x(u, j);
  }
  const double smax = Eigen::JacobiSVD<Eigen::MatrixXd>(xe).singularValues()(0);
  const double step = 1.0 / (2.0 * smax * smax + 1e-300);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> upper(n);
    for (std::size_t j = 0; j < n; ++j) upper[j] = std::sqrt(b) * z[i * n + j];
    std::vector<double> w(m, 1.0 / static_cast<double>(m)), y = w, g;
    double f = row_residual(w, x, upper, nullptr), t = 1.0;
    int stall = 0;
    for (int it = 0; it < 400000 && f > 0.0; ++it) {
      row_residual(y, x, upper, &g);
      std::vector<double> next(m);
      for (std::size_t u = 0; u < m; ++u) next[u] = y[u] - step * g[u];
      next = simplex_active_set(next);
      const double fn = row_residual(next, x, upper, nullptr);
      if (fn > f) {
        if (y == w) break;
        y = w;
        t = 1.0;
        continue;
      }
      const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      for (std::size_t u = 0; u < m; ++u) y[u] = next[u] + (t - 1.0) / tn * (next[u] - w[u]);
      t = tn;
      stall = f - fn <= 1e-15 * f ? stall + 1 : 0;
      w = next;
      f = fn;
      if (stall > 50) break;
    }
    total += f;
  }
  return total;
}

double psi(const DenseMatrix& x, const DenseMatrix& h, const DenseMatrix& w, const DenseMatrix& wt, double lambda) {
  double fit = 0.0, reg = 0.0;
  for (std::size_t u = 0; u < x.rows(); ++u) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double p = 0.0;
      for (std::size_t r = 0; r < h.rows(); ++r) p += w(u, r) * h(r, j);
      fit += (x(u, j) - p) * (x(u, j) - p);
    }
  }
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double p = 0.0;
      for (std::size_t u = 0; u < x.rows(); ++u) p += wt(r, u) * x(u, j);
      reg += (h(r, j) - p) * (h(r, j) - p);
    }
  }
  return fit + lambda * reg;
}

Clustering clustering_counts(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& est,
                             std::size_t k) {
  const std::size_t m = truth.size();
  Clustering c;
  double purity = 0.0, ent = 0.0;
  for (std::size_t r = 0; r < k; ++r) {
    std::size_t mr = 0;
    for (std::size_t i = 0; i < m; ++i) mr += est[i] == r;
    std::size_t best = 0;
    for (std::size_t u = 0; u < k; ++u) {
      std::size_t mru = 0;
      for (std::size_t i = 0; i < m; ++i) mru += est[i] == r && truth[i] == u;
      best = std::max(best, mru);
      if (mru > 0) ent += mru * std::log(static_cast<double>(mru) / mr) / std::log(2.0);
    }
    purity += best;
  }
  c.purity = purity / m;
  c.entropy = k > 1 ? -ent / (m * std::log(static_cast<double>(k)) / std::log(2.0)) : 0.0;
  return c;
}

Singular singular_range(const DenseMatrix& h) {
  Eigen::MatrixXd g(h.rows(), h.rows());
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.rows(); ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < h.cols(); ++c) s += h(i, c) * h(j, c);
      g(i, j) = s;
    }
  }
  const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues();
  return {std::sqrt(std::max(ev.minCoeff(), 0.0)), std::sqrt(std::max(ev.maxCoeff(), 0.0))};
}

DenseMatrix random_nonneg(std::size_t r, std::size_t c, saa::Rng& rng, double zero_prob) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseMatrix out(r, c);
  for (double& v : out.values()) v = u(rng) < zero_prob ? 0.0 : u(rng);
  return out;
}

}  // namespace oracle
