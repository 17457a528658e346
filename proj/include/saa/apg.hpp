#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "saa/error.hpp"
#include "saa/matrix.hpp"

namespace saa {

struct ApgOptions {
  double tol = 1e-10;          // stop when (f_prev - f) <= tol * f_prev
  std::size_t max_iter = 5000;
  double abs_floor = 0.0;      // stop as soon as f <= abs_floor
};

struct ApgOutcome {
  DenseMatrix x;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Accelerated projected gradient (FISTA) with function-value restart.
///
/// `value(x)` returns the objective, `gradient(y)` its gradient, and
/// `project(x)` maps x onto the feasible set in place. The step is 1/L.
/// Whenever a step would increase the objective the momentum is reset and the
/// step is retaken from the last iterate, so accepted values never increase.
/// `history`, when given, receives the value after every accepted step.
template <class Value, class Gradient, class Project>
ApgOutcome minimize_apg(DenseMatrix x0, double lipschitz, Value&& value, Gradient&& gradient,
                        Project&& project, const ApgOptions& opts,
                        std::vector<double>* history = nullptr) {
  ApgOutcome out;
  project(x0);
  out.x = std::move(x0);
  out.value = value(out.x);
  if (history) history->push_back(out.value);
  if (!(lipschitz > 0.0) || out.value <= opts.abs_floor) {
    out.converged = true;
    return out;
  }
  const double step = 1.0 / lipschitz;

  DenseMatrix y = out.x;
  double t = 1.0;
  bool at_restart = true;
  for (std::size_t it = 0; it < opts.max_iter; ++it) {
    out.iterations = it + 1;
    DenseMatrix g = gradient(y);
    DenseMatrix next = y;
    auto nv = next.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < nv.size(); ++i) nv[i] -= step * gv[i];
    project(next);
    const double f_next = value(next);
    if (!std::isfinite(f_next)) throw NumericalError("accelerated gradient produced a non-finite objective");

    if (f_next > out.value) {
      if (at_restart) {
        // A plain projected step from the iterate no longer decreases: round-off floor.
        out.converged = true;
        break;
      }
      y = out.x;
      t = 1.0;
      at_restart = true;
      continue;
    }

    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / t_next;
    y = next;
    auto yv = y.values();
    const auto xv = out.x.values();
    for (std::size_t i = 0; i < yv.size(); ++i) yv[i] += beta * (yv[i] - xv[i]);
    t = t_next;
    at_restart = false;

    const double f_prev = out.value;
    out.x = std::move(next);
    out.value = f_next;
    if (history) history->push_back(f_next);
    if (f_next <= opts.abs_floor || f_prev - f_next <= opts.tol * f_prev) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace saa
