#include "safebandit/evaluation/runner.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace safebandit {

namespace {

[[noreturn]] void rethrow_with_step(int t, const std::exception& err) {
  throw std::runtime_error("step " + std::to_string(t) + ": " + err.what());
}

}  // namespace

EpisodeTrace run_episode(const LinearConstraintProblem& problem,
                         Policy& policy, int horizon, Rng& rng,
                         bool keep_feasible) {
  if (horizon < 1) throw std::invalid_argument("run_episode: horizon < 1");

  EpisodeTrace trace;
  trace.spec_alpha = problem.spec_alpha;
  trace.problem_seed = problem.seed;
  trace.steps.reserve(horizon);

  StepContext ctx;
  ctx.features = &problem.arm_features;
  ctx.actions.resize(problem.num_arms());
  std::iota(ctx.actions.begin(), ctx.actions.end(), 0);
  ctx.baseline = problem.baseline_arm;

  const double feasible_optimum =
      problem.optimal_feasible_reward(problem.spec_alpha);
  const double unconstrained_optimum = problem.optimal_reward();
  const double baseline_constraint =
      problem.constraint_mean(problem.baseline_arm);
  const double violation_threshold =
      (1.0 - problem.spec_alpha) * baseline_constraint;

  for (int t = 1; t <= horizon; ++t) {
    StepRecord record;
    record.t = t;
    try {
      Decision decision = policy.select(ctx, rng);
      double reward, constraint;
      problem.sample_outcomes(decision.action, rng, reward, constraint);

      record.action = decision.action;
      record.baseline_action = decision.baseline;
      record.reward = reward;
      record.constraint = constraint;
      record.exp_reward = problem.reward_mean(decision.action);
      record.exp_constraint = problem.constraint_mean(decision.action);
      record.exp_constraint_baseline = baseline_constraint;
      record.violation = record.exp_constraint < violation_threshold;
      record.regret = std::max(0.0, feasible_optimum - record.exp_reward);
      record.regret_unconstrained = unconstrained_optimum - record.exp_reward;
      if (keep_feasible) record.feasible = decision.feasible;

      policy.observe(ctx, decision, {reward, constraint});
    } catch (const std::exception& err) {
      rethrow_with_step(t, err);
    }
    trace.steps.push_back(std::move(record));
  }
  return trace;
}

EpisodeTrace run_transcode_episode(const TranscodeProblem& problem,
                                   Policy& policy, const RewardShape& shape,
                                   int horizon, Rng& rng, bool keep_feasible) {
  if (horizon < 1)
    throw std::invalid_argument("run_transcode_episode: horizon < 1");

  EpisodeTrace trace;
  trace.spec_alpha = shape.alpha;
  trace.problem_seed = problem.seed();
  trace.steps.reserve(horizon);

  for (int t = 1; t <= horizon; ++t) {
    StepRecord record;
    record.t = t;
    try {
      const TranscodeProblem::Step step = problem.step(rng);
      const int baseline =
          problem.baseline_action(step.context, step.source_quality);

      Eigen::MatrixXd features(step.actions.size(), problem.feature_dim());
      for (std::size_t i = 0; i < step.actions.size(); ++i)
        features.row(i) = problem.features(step.context, step.actions[i]);

      StepContext ctx;
      ctx.features = &features;
      ctx.actions = step.actions;
      ctx.baseline = baseline;

      Decision decision = policy.select(ctx, rng);
      const TranscodeProblem::Outcome outcome =
          problem.outcome(step.context, decision.action, shape, rng);

      const double p_action = problem.success_prob(step.context,
                                                   decision.action);
      const double p_baseline = problem.success_prob(step.context, baseline);
      double best_feasible = -1.0;
      double best_overall = -1.0;
      for (int a : step.actions) {
        const double p = problem.success_prob(step.context, a);
        const double value = p * shape.cumulative_reward(a);
        best_overall = std::max(best_overall, value);
        if (p >= (1.0 - shape.alpha) * p_baseline || a == baseline)
          best_feasible = std::max(best_feasible, value);
      }

      record.action = decision.action;
      record.baseline_action = baseline;
      record.reward = outcome.reward;
      record.constraint = outcome.constraint;
      record.exp_reward = p_action * shape.cumulative_reward(decision.action);
      record.exp_constraint = p_action;
      record.exp_constraint_baseline = p_baseline;
      record.violation =
          record.exp_constraint < (1.0 - shape.alpha) * p_baseline;
      record.regret = std::max(0.0, best_feasible - record.exp_reward);
      record.regret_unconstrained = best_overall - record.exp_reward;
      record.source_quality = step.source_quality;
      if (keep_feasible) record.feasible = decision.feasible;

      policy.observe(ctx, decision, {outcome.reward, outcome.constraint});
    } catch (const std::exception& err) {
      rethrow_with_step(t, err);
    }
    trace.steps.push_back(std::move(record));
  }
  return trace;
}

}  // namespace safebandit
