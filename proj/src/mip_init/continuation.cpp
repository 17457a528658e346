#include "saa/error.hpp"
#include "saa/mip_init.hpp"
#include "saa/random.hpp"

namespace saa {

ContinuationResult continuation(const DenseMatrix& x, const SaaConfig& cfg, const ContinuationOptions& opts) {
  cfg.validate(x.cols());
  ContinuationResult res;
  OuterApproxOptions outer = opts.outer;
  outer.seed = cfg.seed;
  res.init = outer_approximation(x, cfg.k, cfg.ell, outer);

  Factorization& fac = res.factors;
  fac.H = res.init.H;
  fac.Wt = res.init.Wt;
  fac.W = uniform_row_stochastic(x.rows(), cfg.k);
  fac.W = step_W(x, fac, cfg.eps_safeguard);

  for (std::size_t i = 0; i < cfg.lambda.size(); ++i) {
    SaaConfig stage = cfg;
    if (i + 1 < cfg.lambda.size() && opts.intermediate_max_iter > 0) stage.max_iter = opts.intermediate_max_iter;
    SolveResult r = solve(x, fac, stage, cfg.lambda[i]);
    fac = std::move(r.factors);
    res.traces.push_back(std::move(r.trace));
  }
  return res;
}

}  // namespace saa
