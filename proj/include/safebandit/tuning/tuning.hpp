#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "safebandit/problems/transcode.hpp"

namespace safebandit {

/// Measured outcome of one (alpha, Omega) parameterization: the fraction of
/// 1080p-source uploads that completed at 1080p and the overall success
/// rate, both over the evaluation window, with SEMs across replications.
struct ConfigEvaluation {
  RewardShape shape;
  double quality_mean = 0.0;
  double quality_sem = 0.0;
  double reliability_mean = 0.0;
  double reliability_sem = 0.0;
  int replications = 0;
  std::vector<std::uint64_t> seeds;
  bool feasible = false;  // set by the search against the baseline reference
};

struct EvalOptions {
  int horizon = 2500;
  int eval_window = 1000;   // trailing steps the metrics are measured over
  int replications = 5;
  std::uint64_t master_seed = 0;
  double lambda = 1.0;
  int workers = 1;
};

/// Policies comparable on the simulator.
enum class TranscodePolicyKind { ts_asc, vanilla_ts, baseline };

/// Trains a fresh policy per replication and measures the two metrics over
/// the trailing evaluation window. Replication j runs on stream
/// mix(master_seed, j); fixed seeds give identical evaluations.
ConfigEvaluation evaluate_config(const TranscodeProblem& problem,
                                 const RewardShape& shape,
                                 const EvalOptions& options,
                                 TranscodePolicyKind kind =
                                     TranscodePolicyKind::ts_asc);

struct SearchSpace {
  std::vector<double> alphas = {0.0, 0.02, 0.04, 0.06};
  std::vector<double> offsets_480p = {0.0125, 0.03, 0.05};
  std::vector<double> offsets_720p = {0.01, 0.024, 0.04};
  std::vector<double> offsets_1080p = {0.0075, 0.018, 0.03};
  bool random = false;        // grid by default
  std::uint64_t random_seed = 0;
};

struct SearchResult {
  std::vector<ConfigEvaluation> frontier;  // one row per evaluated config
  ConfigEvaluation baseline;               // the reliability reference
  int best_index = -1;                     // into frontier
  bool all_infeasible = false;
  int least_violating_index = -1;          // set when all_infeasible
};

/// Evaluates up to `budget` configurations (grid order: alpha outermost,
/// then the offsets; or uniform random draws) and returns the feasible one
/// with the highest quality mean plus the full frontier. Feasibility allows
/// one pooled SEM of slack on the reliability constraint.
SearchResult constrained_search(const TranscodeProblem& problem,
                                const SearchSpace& space, int budget,
                                const EvalOptions& options);

/// Frontier CSV: alpha,omega_480p,omega_720p,omega_1080p,quality_mean,
/// quality_sem,reliability_mean,reliability_sem,feasible
void export_frontier_csv(const SearchResult& result,
                         const std::filesystem::path& path,
                         const std::string& config_fingerprint);

}  // namespace safebandit
