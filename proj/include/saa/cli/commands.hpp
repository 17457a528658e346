#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "saa/bcd.hpp"
#include "saa/config.hpp"
#include "saa/local_search.hpp"
#include "saa/mip_init.hpp"

namespace saa::cli {

inline constexpr const char* kSynthSchema = "saa.synth/1";
inline constexpr const char* kFitSchema = "saa.fit/1";
inline constexpr const char* kEvalSchema = "saa.eval/1";
inline constexpr const char* kSweepSchema = "saa.sweep/1";

enum class InitMode { kZero, kMip };

struct PipelineOptions {
  InitMode init = InitMode::kMip;
  bool local_search = true;
  ContinuationOptions continuation;
  LocalSearchOptions search;
};

struct PipelineResult {
  Factorization factors;
  std::vector<SolveTrace> traces;  // one per solve
  std::optional<OuterApproxResult> init;
  std::optional<LocalSearchResult> search;
  double objective = 0.0;  // at cfg.final_lambda()
  double seconds_init = 0.0;
  double seconds_solve = 0.0;
  double seconds_search = 0.0;
};

/// Zero: one solve at the final lambda from zero_initialization(cfg.seed).
/// Mip: outer-approximation start and continuation over cfg.lambda.
/// Either is optionally followed by local search at the final lambda.
PipelineResult run_pipeline(const DenseMatrix& x, const SaaConfig& cfg, const PipelineOptions& opts);

struct SynthSpec {
  std::size_t m = 0, n = 0, k = 0;
  double sigma_z = 0.1;
  double zero_frac = 0.2;
  std::uint64_t seed = 0;
  bool separable = false;
  std::filesystem::path out;
};

struct FitSpec {
  std::filesystem::path input;
  std::filesystem::path out;
  SaaConfig cfg;
  PipelineOptions pipeline;
};

struct EvalSpec {
  std::filesystem::path h_hat, h0, x0, z;
  std::size_t ell = 0;
  std::filesystem::path x;            // optional, with true_labels
  std::filesystem::path true_labels;  // optional, one 0-based label per line
  std::optional<double> lambda;       // adds the penalized constants
  std::filesystem::path out;
};

struct SweepSpec {
  std::size_t m = 0, n = 0, k = 0;
  double zero_frac = 0.2;
  std::vector<double> sigma_z;
  std::vector<double> ell_frac;
  std::vector<std::uint64_t> seeds;
  SaaConfig cfg;  // k, ell and seed are set per run
  PipelineOptions pipeline;
  std::filesystem::path out;
};

void cmd_synth(const SynthSpec& spec);
void cmd_fit(const FitSpec& spec);
void cmd_eval(const EvalSpec& spec);
void cmd_sweep(const SweepSpec& spec);

// One row per sweep run, in grid order (sigma_z, ell_frac, seed).
struct SweepRow {
  std::uint64_t seed = 0;
  double sigma_z = 0.0;
  double ell_frac = 0.0;
  std::size_t ell = 0;
  double weak = 0.0;
  double strong = 0.0;
  double psi = 0.0;
  double purity = 0.0;
  double entropy = 0.0;
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

std::vector<std::size_t> read_labels(const std::filesystem::path& path);

// Maps exception types to the documented exit codes: 2 invalid input, 3 I/O, 4 numerical.
int exit_code_for_current_exception();

// Runs the command line; returns the process exit code.
int run(int argc, char** argv);

}  // namespace saa::cli
