#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace safebandit {

/// Per-step record of an episode. Expected values are under the true
/// environment model; the violation flag and the regrets are evaluated
/// against the environment's spec alpha, not the policy-internal one.
struct StepRecord {
  int t = 0;  // 1-based
  int action = 0;
  int baseline_action = 0;
  double reward = 0.0;
  double constraint = 0.0;
  double exp_reward = 0.0;
  double exp_constraint = 0.0;
  double exp_constraint_baseline = 0.0;
  bool violation = false;
  double regret = 0.0;                // vs the best feasible arm, floored at 0
  double regret_unconstrained = 0.0;  // vs the best arm overall
  int source_quality = -1;            // transcode only
  std::vector<int> feasible;          // the decision's feasible-set snapshot
};

struct EpisodeTrace {
  std::string policy;
  double policy_alpha = 0.0;
  double spec_alpha = 0.0;
  int realization = 0;
  std::uint64_t problem_seed = 0;
  std::vector<StepRecord> steps;

  int horizon() const { return static_cast<int>(steps.size()); }
};

/// Trailing moving average of the violation flag; element k (0-based)
/// covers steps [k+1, k+window]. Requires 1 <= window <= T.
std::vector<double> violation_moving_average(const EpisodeTrace& trace,
                                             int window);

/// Mean over the last k steps of the chosen arm's expected constraint value
/// normalized by the baseline's. Requires T >= k.
double normalized_constraint_last_k(const EpisodeTrace& trace, int k = 100);

}  // namespace safebandit
