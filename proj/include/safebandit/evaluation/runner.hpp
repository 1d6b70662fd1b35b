#pragma once

#include "safebandit/evaluation/trace.hpp"
#include "safebandit/policies/policy.hpp"
#include "safebandit/problems/linear_problem.hpp"
#include "safebandit/problems/transcode.hpp"

namespace safebandit {

/// Runs the select/observe loop for T steps on the fixed-arm linear problem.
/// The one random stream drives both the policy's posterior draws and the
/// outcome noise, so a (problem, policy config, seed) triple fully determines
/// the trace. keep_feasible controls whether the per-step feasible-set
/// snapshots are retained (they are only needed when persisting traces).
EpisodeTrace run_episode(const LinearConstraintProblem& problem,
                         Policy& policy, int horizon, Rng& rng,
                         bool keep_feasible = false);

/// Transcode counterpart; per-step contexts, action availability, and the
/// frozen baseline heuristic come from the problem.
EpisodeTrace run_transcode_episode(const TranscodeProblem& problem,
                                   Policy& policy, const RewardShape& shape,
                                   int horizon, Rng& rng,
                                   bool keep_feasible = false);

}  // namespace safebandit
