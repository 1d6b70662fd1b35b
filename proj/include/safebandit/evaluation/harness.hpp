#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "safebandit/evaluation/export.hpp"
#include "safebandit/policies/policy.hpp"
#include "safebandit/problems/linear_problem.hpp"

namespace safebandit {

/// Model hyperparameters shared by the learning policies.
struct ModelParams {
  double lambda = 1.0;
  double sigma = 0.1;
  double delta = 0.001;
  double param_bound = 0.0;    // S; 0 selects the 3*sqrt(d) default
  double feature_bound = 0.0;  // L; grows as arms are registered
  double baseline_value_lower_bound = 0.0;  // r_l for CLUCB2-ASC-C
};

/// One experiment cell: a policy run against the environment generated with
/// spec_alpha. policy_alpha is the policy-internal constraint parameter; it
/// defaults to spec_alpha but the two are independent knobs.
struct CellSpec {
  std::string policy;
  double spec_alpha = 0.0;
  double policy_alpha = 0.0;
  std::optional<double> baseline_value_lower_bound;  // per-cell r_l override
};

inline const std::vector<std::string> kPolicyNames = {
    "ts_asc", "vanilla_ts", "clucb2_asc_c", "clucb2_asc_i", "baseline"};

std::unique_ptr<Policy> make_policy(const std::string& name, int dim,
                                    const ModelParams& model,
                                    double policy_alpha);

struct SuiteOptions {
  int horizon = 2000;
  int realizations = 200;
  std::uint64_t master_seed = 0;
  int num_arms = 100;
  int dim = 4;
  double problem_noise_std = 0.1;
  ModelParams model;
  int workers = 1;
  int normalized_window = 100;
  int save_traces = 0;                 // persist the first N realizations
  std::filesystem::path trace_dir;     // required when save_traces > 0
  std::string config_fingerprint;
};

/// Runs every cell over shared problem realizations. Realization i draws its
/// problem from seed mix(master, i, 0) (one per distinct spec_alpha) and its
/// episode stream from mix(master, i, 1); cells therefore see paired
/// problems and aligned random streams. Results are merged in realization
/// order, so output is identical for any worker count.
std::vector<CellSeries> run_synthetic_suite(const SuiteOptions& options,
                                            const std::vector<CellSpec>& cells);

/// Same cell structure on the transcode simulator: one fixed ground truth
/// (from family_seed), fresh policies per realization, default reward
/// offsets with the cell's policy alpha. CLUCB2 policies are linear-Gaussian
/// and are rejected here.
std::vector<CellSeries> run_transcode_suite(const SuiteOptions& options,
                                            std::uint64_t family_seed,
                                            int context_dim,
                                            const std::vector<CellSpec>& cells);

/// Headline numbers for one cell: per-step aggregate means averaged over the
/// final 10% of steps, the trailing moving-average violation rate at the
/// horizon, and the normalized-constraint scalar.
struct CellSummary {
  double final_regret = 0.0;
  double final_regret_unconstrained = 0.0;
  double final_violation_rate = 0.0;
  MeanSem normalized_last_k;
};
CellSummary summarize_cell(const AggregateSeries& series, int window);

/// Trace persistence (JSON lines; one header record then one per step).
void write_trace_jsonl(const std::filesystem::path& path,
                       const EpisodeTrace& trace,
                       const std::string& config_fingerprint);
EpisodeTrace read_trace_jsonl(const std::filesystem::path& path);

std::filesystem::path trace_filename(const std::filesystem::path& dir,
                                     const CellSpec& cell, int realization);

}  // namespace safebandit
