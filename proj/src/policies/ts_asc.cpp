#include "safebandit/policies/ts_asc.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace safebandit {

Decision select_from_values(const std::vector<double>& reward_values,
                            const std::vector<double>& constraint_values,
                            const std::vector<int>& actions, int baseline,
                            double alpha, bool constraint_filter) {
  if (reward_values.size() != actions.size() ||
      constraint_values.size() != actions.size())
    throw std::invalid_argument("select_from_values: size mismatch");
  const auto baseline_pos =
      std::find(actions.begin(), actions.end(), baseline);
  if (baseline_pos == actions.end())
    throw std::invalid_argument(
        "select_from_values: baseline not among the available actions");
  const std::size_t b = std::distance(actions.begin(), baseline_pos);

  Decision decision;
  decision.baseline = baseline;
  decision.reward_values = reward_values;
  decision.constraint_values = constraint_values;
  decision.constraint_threshold =
      constraint_filter ? (1.0 - alpha) * constraint_values[b]
                        : -std::numeric_limits<double>::infinity();

  int best = -1;
  double best_value = 0.0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const bool feasible =
        !constraint_filter ||
        constraint_values[i] >= decision.constraint_threshold ||
        actions[i] == baseline;
    if (!feasible) continue;
    decision.feasible.push_back(actions[i]);
    if (best < 0 || reward_values[i] > best_value ||
        (reward_values[i] == best_value && actions[i] < best)) {
      best = actions[i];
      best_value = reward_values[i];
    }
  }
  decision.action = best;
  return decision;
}

Decision BaselinePolicy::select(const StepContext& ctx, Rng&) {
  Decision decision;
  decision.action = ctx.baseline;
  decision.baseline = ctx.baseline;
  decision.feasible = {ctx.baseline};
  return decision;
}

TsAscLinear::TsAscLinear(int dim, double lambda, double noise_std,
                         Options options)
    : options_(options),
      reward_posterior_(dim, lambda, noise_std),
      constraint_posterior_(dim, lambda, noise_std) {}

Decision TsAscLinear::select(const StepContext& ctx, Rng& rng) {
  const Eigen::MatrixXd& features = *ctx.features;
  // One model draw per metric per step; reward first.
  const Eigen::VectorXd theta_reward = reward_posterior_.sample(rng);
  const Eigen::VectorXd theta_constraint = constraint_posterior_.sample(rng);
  const Eigen::VectorXd reward_values = features * theta_reward;
  const Eigen::VectorXd constraint_values = features * theta_constraint;
  return select_from_values(
      {reward_values.data(), reward_values.data() + reward_values.size()},
      {constraint_values.data(),
       constraint_values.data() + constraint_values.size()},
      ctx.actions, ctx.baseline, options_.alpha, options_.constraint_filter);
}

void TsAscLinear::observe(const StepContext& ctx, const Decision& decision,
                          const Outcome& outcome) {
  const auto pos = std::find(ctx.actions.begin(), ctx.actions.end(),
                             decision.action);
  if (pos == ctx.actions.end())
    throw std::invalid_argument("TsAscLinear::observe: unknown action");
  const Eigen::VectorXd x =
      ctx.features->row(std::distance(ctx.actions.begin(), pos));
  reward_posterior_.update(x, outcome.reward);
  constraint_posterior_.update(x, outcome.constraint);
  ++steps_;
}

TsAscBernoulli::TsAscBernoulli(int feature_dim, double lambda,
                               RewardShape shape, Options options)
    : options_(options), shape_(shape), model_(feature_dim, lambda) {}

Decision TsAscBernoulli::select(const StepContext& ctx, Rng& rng) {
  const Eigen::MatrixXd& features = *ctx.features;
  const Eigen::VectorXd theta = model_.sample(rng);
  std::vector<double> reward_values(ctx.actions.size());
  std::vector<double> constraint_values(ctx.actions.size());
  for (std::size_t i = 0; i < ctx.actions.size(); ++i) {
    const double p = logistic(features.row(i).dot(theta));
    constraint_values[i] = p;
    reward_values[i] = p * shape_.cumulative_reward(ctx.actions[i]);
  }
  return select_from_values(reward_values, constraint_values, ctx.actions,
                            ctx.baseline, options_.alpha,
                            options_.constraint_filter);
}

void TsAscBernoulli::observe(const StepContext& ctx, const Decision& decision,
                             const Outcome& outcome) {
  const auto pos = std::find(ctx.actions.begin(), ctx.actions.end(),
                             decision.action);
  if (pos == ctx.actions.end())
    throw std::invalid_argument("TsAscBernoulli::observe: unknown action");
  const Eigen::VectorXd x =
      ctx.features->row(std::distance(ctx.actions.begin(), pos));
  model_.add(x, outcome.constraint > 0.5 ? 1 : 0);
  model_.fit(options_.refit_max_iter, options_.refit_grad_tol);
  ++steps_;
}

}  // namespace safebandit
