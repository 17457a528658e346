#include "saa/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "saa/csv.hpp"
#include "saa/error.hpp"
#include "saa/evaluation.hpp"
#include "saa/geometry.hpp"
#include "saa/linalg.hpp"

namespace saa::cli {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const fs::path& dir) {
  if (dir.empty()) throw InvalidInput("an output directory is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text_file(path, j.dump(2) + "\n"); }

// nlohmann prints doubles with the shortest round-trip form; keep that, but
// reject non-finite values that JSON cannot carry.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::string trace_csv(const std::vector<SolveTrace>& traces, const std::vector<double>& lambdas) {
  std::string out = "stage,lambda,iteration,fit,reg,total\n";
  for (std::size_t s = 0; s < traces.size(); ++s) {
    const SolveTrace& t = traces[s];
    for (std::size_t i = 0; i < t.objectives.size(); ++i) {
      out += std::to_string(s) + ',' + format_double(lambdas[s]) + ',' + std::to_string(i) + ',' +
             format_double(t.fits[i]) + ',' + format_double(t.regs[i]) + ',' + format_double(t.objectives[i]) + '\n';
    }
  }
  return out;
}

std::vector<std::size_t> dominant_labels(const DenseMatrix& w0) {
  std::vector<std::size_t> labels(w0.rows(), 0);
  for (std::size_t i = 0; i < w0.rows(); ++i) {
    for (std::size_t j = 1; j < w0.cols(); ++j) {
      if (w0(i, j) > w0(i, labels[i])) labels[i] = j;
    }
  }
  return labels;
}

std::size_t ell_for(double frac, std::size_t n, std::size_t k) {
  if (!(frac > 0.0 && frac <= 1.0)) throw InvalidInput("ell fraction must lie in (0, 1]");
  const auto ell = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n * k)));
  return std::max<std::size_t>(ell, 1);
}

}  // namespace

PipelineResult run_pipeline(const DenseMatrix& x, const SaaConfig& cfg, const PipelineOptions& opts) {
  for (const std::string& w : cfg.validate(x.cols())) std::cerr << "warning: " << w << "\n";
  if (cfg.k > x.rows()) std::cerr << "warning: k exceeds the number of data points\n";

  PipelineResult res;
  auto t0 = std::chrono::steady_clock::now();
  if (opts.init == InitMode::kZero) {
    const Factorization init = zero_initialization(x, cfg.k, cfg.seed);
    res.seconds_init = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    SolveResult r = solve(x, init, cfg);
    res.factors = std::move(r.factors);
    res.traces.push_back(std::move(r.trace));
    res.seconds_solve = seconds_since(t0);
  } else {
    ContinuationResult c = continuation(x, cfg, opts.continuation);
    res.factors = std::move(c.factors);
    res.traces = std::move(c.traces);
    res.init = std::move(c.init);
    res.seconds_solve = seconds_since(t0);
  }

  if (opts.local_search) {
    t0 = std::chrono::steady_clock::now();
    LocalSearchResult ls = local_search(x, res.factors, cfg, opts.search);
    res.factors = ls.factors;
    res.search = std::move(ls);
    res.seconds_search = seconds_since(t0);
  }
  res.objective = objective(x, res.factors, cfg.final_lambda()).total;
  if (!std::isfinite(res.objective)) throw NumericalError("final objective is not finite");
  return res;
}

void cmd_synth(const SynthSpec& spec) {
  ensure_dir(spec.out);
  const SynthInstance s = spec.separable
                              ? synth_separable_instance(spec.m, spec.n, spec.k, spec.sigma_z, spec.zero_frac, spec.seed)
                              : synth_instance(spec.m, spec.n, spec.k, spec.sigma_z, spec.zero_frac, spec.seed);
  write_matrix_csv(spec.out / "X.csv", s.X);
  write_matrix_csv(spec.out / "X0.csv", s.X0);
  write_matrix_csv(spec.out / "H0.csv", s.H0);
  write_matrix_csv(spec.out / "W0.csv", s.W0);
  write_matrix_csv(spec.out / "Z.csv", s.Z);

  nlohmann::json j;
  j["schema"] = kSynthSchema;
  j["m"] = s.X.rows();
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["sigma_z"] = spec.sigma_z;
  j["zero_frac"] = spec.zero_frac;
  j["seed"] = spec.seed;
  j["separable"] = spec.separable;
  j["nnz_H0"] = nnz(s.H0, 0.0);
  j["files"] = {{"X", "X.csv"}, {"X0", "X0.csv"}, {"H0", "H0.csv"}, {"W0", "W0.csv"}, {"Z", "Z.csv"}};
  write_json(spec.out / "manifest.json", j);
}

void cmd_fit(const FitSpec& spec) {
  const DenseMatrix x = read_matrix_csv(spec.input);
  if (x.empty()) throw InvalidInput("input matrix '" + spec.input.string() + "' is empty");
  if (spec.cfg.ell == 0) throw InvalidInput("ell = 0 leaves no nonzero archetype entry; choose 0 < ell <= k n");
  ensure_dir(spec.out);

  const PipelineResult r = run_pipeline(x, spec.cfg, spec.pipeline);
  const double lambda = spec.cfg.final_lambda();

  write_matrix_csv(spec.out / "H.csv", r.factors.H);
  write_matrix_csv(spec.out / "W.csv", r.factors.W);
  write_matrix_csv(spec.out / "Wt.csv", r.factors.Wt);
  std::vector<double> lambdas = spec.pipeline.init == InitMode::kZero ? std::vector<double>{lambda} : spec.cfg.lambda;
  write_text_file(spec.out / "trace.csv", trace_csv(r.traces, lambdas));
  write_swap_log_csv(spec.out / "swaps.csv", r.search ? r.search->proposals : std::vector<SwapProposal>{});
  if (r.init) write_json(spec.out / "cutset.json", to_json(r.init->cuts));

  const ObjectiveBreakdown obj = objective(x, r.factors, lambda);
  const StationarityReport st = stationarity_residual(x, r.factors, spec.cfg, lambda);
  nlohmann::json j;
  j["schema"] = kFitSchema;
  j["input"] = spec.input.string();
  j["m"] = x.rows();
  j["n"] = x.cols();
  j["config"] = spec.cfg;
  j["init"] = spec.pipeline.init == InitMode::kZero ? "zero" : "mip";
  j["local_search"] = spec.pipeline.local_search;
  j["objective"] = {{"total", obj.total}, {"fit", obj.fit}, {"reg", obj.reg}, {"lambda", lambda}};
  j["nnz_H"] = nnz(r.factors.H, 0.0);
  nlohmann::json stages = nlohmann::json::array();
  for (const SolveTrace& t : r.traces) {
    stages.push_back({{"iterations", t.iterations},
                      {"converged", t.converged},
                      {"stationarity_residual", t.stationarity_residual},
                      {"boundary_tie", t.boundary_tie}});
  }
  j["stages"] = stages;
  j["final_stationarity"] = {{"residual", st.residual}, {"boundary_tie", st.boundary_tie}, {"boundary_gap", st.boundary_gap}};
  if (r.init) {
    j["outer_approximation"] = {{"rounds", r.init->rounds},
                                {"best_upper", r.init->cuts.best_upper},
                                {"best_lower", r.init->cuts.best_lower},
                                {"gap", r.init->cuts.gap},
                                {"stalled", r.init->stalled}};
  }
  j["swaps_accepted"] = r.search ? r.search->swaps_accepted : 0;
  j["files"] = {{"H", "H.csv"}, {"W", "W.csv"}, {"Wt", "Wt.csv"}, {"trace", "trace.csv"}, {"swaps", "swaps.csv"}};
  write_json(spec.out / "summary.json", j);

  // Wall-clock times live apart from the summary so that reruns compare equal.
  write_json(spec.out / "timings.json", {{"schema", kFitSchema},
                                         {"seconds_init", r.seconds_init},
                                         {"seconds_solve", r.seconds_solve},
                                         {"seconds_local_search", r.seconds_search}});
}

std::vector<std::size_t> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::size_t> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(line, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || v < 0 || line.find_first_not_of(" \t", used) != std::string::npos) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": bad label '" + line + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

void cmd_eval(const EvalSpec& spec) {
  const DenseMatrix h_hat = read_matrix_csv(spec.h_hat);
  const DenseMatrix h0 = read_matrix_csv(spec.h0);
  const DenseMatrix x0 = read_matrix_csv(spec.x0);
  const DenseMatrix z = read_matrix_csv(spec.z);
  if (h_hat.cols() != h0.cols()) {
    throw InvalidInput("H_hat has " + std::to_string(h_hat.cols()) + " columns but H0 has " +
                       std::to_string(h0.cols()));
  }
  ensure_dir(spec.out);

  const RobustnessReport rep = robustness_report(h0, h_hat, x0, z, spec.ell);
  nlohmann::json j;
  j["schema"] = kEvalSchema;
  j["ell"] = spec.ell;
  j["robustness"] = rep;
  if (spec.lambda) {
    if (rep.constants.defined) {
      const PenalizedConstants pc = penalized_constants(x0.rows(), h0.rows(), rep.kappa, *spec.lambda);
      j["penalized"] = {{"lambda", *spec.lambda}, {"c1", pc.c1}, {"c2", pc.c2}, {"c3", pc.c3},
                        {"weak_rhs", pc.c1 * rep.delta}, {"condition_lhs", pc.c3 * rep.delta},
                        {"strong_rhs", pc.c2 * rep.delta}};
    } else {
      j["penalized"] = nullptr;
    }
  }
  if (!spec.true_labels.empty()) {
    if (spec.x.empty()) throw InvalidInput("clustering metrics need the data matrix (--x) alongside the labels");
    const DenseMatrix x = read_matrix_csv(spec.x);
    const auto truth = read_labels(spec.true_labels);
    if (truth.size() != x.rows()) throw InvalidInput("label count does not match the number of data rows");
    j["clustering"] = cluster_metrics(truth, cluster_assign(x, h_hat), h_hat.rows());
  }
  write_json(spec.out / "report.json", j);
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  if (spec.sigma_z.empty() || spec.ell_frac.empty() || spec.seeds.empty()) {
    throw InvalidInput("sweep grids must be nonempty");
  }
  std::vector<SweepRow> rows;
  for (double sigma : spec.sigma_z) {
    for (double frac : spec.ell_frac) {
      for (std::uint64_t seed : spec.seeds) {
        const SynthInstance inst = synth_instance(spec.m, spec.n, spec.k, sigma, spec.zero_frac, seed);
        SaaConfig cfg = spec.cfg;
        cfg.k = spec.k;
        cfg.ell = ell_for(frac, spec.n, spec.k);
        cfg.seed = seed;
        const PipelineResult r = run_pipeline(inst.X, cfg, spec.pipeline);
        SweepRow row;
        row.seed = seed;
        row.sigma_z = sigma;
        row.ell_frac = frac;
        row.ell = cfg.ell;
        row.weak = archetype_distance(inst.H0, r.factors.H).value;
        row.strong = archetype_distance(r.factors.H, inst.H0).value;
        row.psi = r.objective;
        const ClusterMetrics cm = cluster_metrics(dominant_labels(inst.W0), cluster_assign(inst.X, r.factors.H), spec.k);
        row.purity = cm.purity;
        row.entropy = cm.entropy;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

void cmd_sweep(const SweepSpec& spec) {
  ensure_dir(spec.out);
  const std::vector<SweepRow> rows = run_sweep(spec);

  std::string csv = "schema,seed,sigma_z,ell_frac,ell,weak,strong,psi,purity,entropy\n";
  for (const SweepRow& r : rows) {
    csv += std::string(kSweepSchema) + ',' + std::to_string(r.seed) + ',' + format_double(r.sigma_z) + ',' +
           format_double(r.ell_frac) + ',' + std::to_string(r.ell) + ',' + format_double(r.weak) + ',' +
           format_double(r.strong) + ',' + format_double(r.psi) + ',' + format_double(r.purity) + ',' +
           format_double(r.entropy) + '\n';
  }
  write_text_file(spec.out / "results.csv", csv);

  nlohmann::json points = nlohmann::json::array();
  for (double sigma : spec.sigma_z) {
    for (double frac : spec.ell_frac) {
      double weak = 0, strong = 0, psi = 0, purity = 0, entropy = 0;
      std::size_t count = 0;
      for (const SweepRow& r : rows) {
        if (r.sigma_z != sigma || r.ell_frac != frac) continue;
        weak += r.weak;
        strong += r.strong;
        psi += r.psi;
        purity += r.purity;
        entropy += r.entropy;
        ++count;
      }
      const double c = static_cast<double>(count);
      points.push_back({{"sigma_z", sigma},
                        {"ell_frac", frac},
                        {"runs", count},
                        {"mean_weak", num(weak / c)},
                        {"mean_strong", num(strong / c)},
                        {"mean_psi", num(psi / c)},
                        {"mean_purity", num(purity / c)},
                        {"mean_entropy", num(entropy / c)}});
    }
  }
  write_json(spec.out / "aggregate.json", {{"schema", kSweepSchema},
                                           {"m", spec.m},
                                           {"n", spec.n},
                                           {"k", spec.k},
                                           {"zero_frac", spec.zero_frac},
                                           {"config", spec.cfg},
                                           {"points", points}});
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

std::vector<double> parse_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidInput(std::string("bad ") + what + " value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput(std::string("empty ") + what + " list");
  return out;
}

// "0-9" or "1,4,7"
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  const auto dash = text.find('-');
  try {
    if (dash != std::string::npos) {
      const auto lo = std::stoull(text.substr(0, dash)), hi = std::stoull(text.substr(dash + 1));
      if (hi < lo) throw InvalidInput("seed range is empty");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const InvalidInput*>(&e)) throw;
    throw InvalidInput("bad seed list '" + text + "'");
  }
  if (out.empty()) throw InvalidInput("empty seed list");
  return out;
}

struct CommonFlags {
  std::string config_path;
  std::size_t k = 0, ell = 0;
  std::string lambda = "log:30:1:8";
  double eps_safeguard = 1e-6, tol_objective = 1e-8, tol_stationary = 1e-6;
  std::size_t max_iter = 10000;
  std::uint64_t seed = 0;
  std::string init = "mip";
  std::string local_search = "on";
  std::string start = "furthest";
  std::size_t max_swaps = 100;
  std::size_t oa_rounds = 5;
  double oa_tol_gap = 1e-4;
  double oa_time_budget = 0.0;
  double milp_time_limit = 0.0;
  std::size_t milp_node_limit = 20000;
  std::size_t intermediate_max_iter = 2000;
};

void add_common(CLI::App* app, CommonFlags& f, bool with_shape) {
  app->add_option("--config", f.config_path, "JSON configuration; explicit flags override it");
  if (with_shape) {
    app->add_option("--k", f.k, "number of archetypes");
    app->add_option("--ell", f.ell, "sparsity budget on H");
  }
  app->add_option("--lambda", f.lambda, "single value, comma list, or log:hi:lo:n");
  app->add_option("--eps-safeguard", f.eps_safeguard);
  app->add_option("--tol-objective", f.tol_objective);
  app->add_option("--tol-stationary", f.tol_stationary);
  app->add_option("--max-iter", f.max_iter);
  app->add_option("--seed", f.seed);
  app->add_option("--init", f.init, "zero or mip")->check(CLI::IsMember({"zero", "mip"}));
  app->add_option("--local-search", f.local_search, "on or off")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--start", f.start, "initial pattern: uniform, random, furthest")
      ->check(CLI::IsMember({"uniform", "random", "furthest"}));
  app->add_option("--max-swaps", f.max_swaps);
  app->add_option("--oa-rounds", f.oa_rounds);
  app->add_option("--oa-tol-gap", f.oa_tol_gap);
  app->add_option("--oa-time-budget", f.oa_time_budget, "seconds, 0 for unlimited");
  app->add_option("--milp-time-limit", f.milp_time_limit, "seconds per MILP, 0 for unlimited");
  app->add_option("--milp-node-limit", f.milp_node_limit);
  app->add_option("--intermediate-max-iter", f.intermediate_max_iter, "iteration cap before the last lambda");
}

SaaConfig build_config(const CLI::App* app, const CommonFlags& f) {
  SaaConfig cfg;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) throw IoError("cannot open '" + f.config_path + "' for reading");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw InvalidInput("'" + f.config_path + "' is not valid JSON: " + e.what());
    }
    cfg = j.get<SaaConfig>();
  }
  auto given = [&](const char* name) { return app->count(name) > 0; };
  if (given("--k")) cfg.k = f.k;
  if (given("--ell")) cfg.ell = f.ell;
  if (given("--lambda") || f.config_path.empty()) cfg.lambda = parse_lambda_schedule(f.lambda);
  if (given("--eps-safeguard")) cfg.eps_safeguard = f.eps_safeguard;
  if (given("--tol-objective")) cfg.tol_objective = f.tol_objective;
  if (given("--tol-stationary")) cfg.tol_stationary = f.tol_stationary;
  if (given("--max-iter")) cfg.max_iter = f.max_iter;
  if (given("--seed")) cfg.seed = f.seed;
  return cfg;
}

PipelineOptions build_pipeline(const CommonFlags& f) {
  PipelineOptions p;
  p.init = f.init == "zero" ? InitMode::kZero : InitMode::kMip;
  p.local_search = f.local_search == "on";
  p.search.max_swaps = f.max_swaps;
  OuterApproxOptions& o = p.continuation.outer;
  o.start = f.start == "uniform" ? StartPattern::kUniform
                                 : (f.start == "random" ? StartPattern::kRandom : StartPattern::kFurthestSum);
  o.max_rounds = f.oa_rounds;
  o.tol_gap = f.oa_tol_gap;
  o.time_budget_seconds = f.oa_time_budget;
  o.milp.time_limit_seconds = f.milp_time_limit;
  o.milp.node_limit = f.milp_node_limit;
  p.continuation.intermediate_max_iter = f.intermediate_max_iter;
  return p;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Sparse archetypal analysis"};
  app.require_subcommand(1);

  SynthSpec synth;
  std::string synth_out;
  auto* s = app.add_subcommand("synth", "generate a synthetic instance");
  s->add_option("--m", synth.m, "data points")->required();
  s->add_option("--n", synth.n, "features")->required();
  s->add_option("--k", synth.k, "archetypes")->required();
  s->add_option("--sigma-z", synth.sigma_z, "noise standard deviation");
  s->add_option("--zero-frac", synth.zero_frac, "fraction of H0 entries set to zero");
  s->add_option("--seed", synth.seed);
  s->add_flag("--separable", synth.separable, "append the rows of H0 to the data");
  s->add_option("--out", synth_out, "output directory")->required();

  std::string fit_in, fit_out;
  CommonFlags fit_flags;
  auto* f = app.add_subcommand("fit", "fit sparse archetypes to a data matrix");
  f->add_option("--input", fit_in, "data matrix CSV")->required();
  f->add_option("--out", fit_out, "output directory")->required();
  add_common(f, fit_flags, true);

  EvalSpec eval;
  std::string e_hhat, e_h0, e_x0, e_z, e_x, e_labels, e_out;
  double e_lambda = 0.0;
  bool sweep_mode = false;
  std::string sw_sigma = "0.1", sw_frac = "0.5", sw_seeds = "0-9";
  SweepSpec sweep;
  CommonFlags sweep_flags;
  auto* e = app.add_subcommand("eval", "robustness and clustering evaluation, single or sweep");
  e->add_option("--out", e_out, "output directory")->required();
  e->add_option("--h-hat", e_hhat, "estimated archetypes CSV");
  e->add_option("--h0", e_h0, "true archetypes CSV");
  e->add_option("--x0", e_x0, "noiseless data CSV");
  e->add_option("--z", e_z, "noise CSV");
  e->add_option("--x", e_x, "data CSV, needed with --true-labels");
  e->add_option("--true-labels", e_labels, "one 0-based label per line");
  e->add_option("--penalty", e_lambda, "lambda for the penalized-problem constants");
  e->add_flag("--sweep", sweep_mode, "generate, fit and evaluate over a grid");
  e->add_option("--m", sweep.m);
  e->add_option("--n", sweep.n);
  e->add_option("--zero-frac", sweep.zero_frac);
  e->add_option("--sigma-z", sw_sigma, "comma list");
  e->add_option("--ell-frac", sw_frac, "comma list of ell / (n k)");
  e->add_option("--seeds", sw_seeds, "range a-b or comma list");
  add_common(e, sweep_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (s->parsed()) {
      synth.out = synth_out;
      cmd_synth(synth);
    } else if (f->parsed()) {
      FitSpec spec;
      spec.input = fit_in;
      spec.out = fit_out;
      spec.cfg = build_config(f, fit_flags);
      spec.pipeline = build_pipeline(fit_flags);
      cmd_fit(spec);
    } else if (sweep_mode) {
      sweep.k = sweep_flags.k;
      sweep.sigma_z = parse_list(sw_sigma, "sigma_z");
      sweep.ell_frac = parse_list(sw_frac, "ell fraction");
      sweep.seeds = parse_seeds(sw_seeds);
      sweep.cfg = build_config(e, sweep_flags);
      sweep.pipeline = build_pipeline(sweep_flags);
      sweep.out = e_out;
      if (sweep.m == 0 || sweep.n == 0 || sweep.k == 0) throw InvalidInput("--sweep needs --m, --n and --k");
      cmd_sweep(sweep);
    } else {
      if (e_hhat.empty() || e_h0.empty() || e_x0.empty() || e_z.empty()) {
        throw InvalidInput("eval needs --h-hat, --h0, --x0 and --z (or --sweep)");
      }
      if (!e->count("--ell")) throw InvalidInput("eval needs --ell");
      eval.h_hat = e_hhat;
      eval.h0 = e_h0;
      eval.x0 = e_x0;
      eval.z = e_z;
      eval.x = e_x;
      eval.true_labels = e_labels;
      eval.ell = sweep_flags.ell;
      if (e->count("--penalty")) eval.lambda = e_lambda;
      eval.out = e_out;
      cmd_eval(eval);
    }
  } catch (...) {
    return exit_code_for_current_exception();
  }
  return 0;
}

}  // namespace saa::cli
