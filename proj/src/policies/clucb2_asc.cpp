#include "safebandit/policies/clucb2_asc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safebandit {

Clucb2Asc::Clucb2Asc(int dim, double lambda, double noise_std, Options options)
    : options_(options),
      reward_posterior_(dim, lambda, noise_std),
      constraint_posterior_(dim, lambda, noise_std),
      radius_(options.delta,
              options.param_bound > 0.0 ? options.param_bound
                                        : 3.0 * std::sqrt(dim),
              options.feature_bound) {
  acc_.chosen_sum = Eigen::VectorXd::Zero(dim);
  acc_.baseline_on_baseline_sum = Eigen::VectorXd::Zero(dim);
  acc_.baseline_on_deviation_sum = Eigen::VectorXd::Zero(dim);
}

double Clucb2Asc::current_beta() const {
  return radius_.beta(steps_, reward_posterior_.noise_std(),
                      reward_posterior_.lambda(), reward_posterior_.dim());
}

Decision Clucb2Asc::select(const StepContext& ctx, Rng&) {
  const Eigen::MatrixXd& features = *ctx.features;
  const auto baseline_pos =
      std::find(ctx.actions.begin(), ctx.actions.end(), ctx.baseline);
  if (baseline_pos == ctx.actions.end())
    throw std::invalid_argument(
        "Clucb2Asc::select: baseline not among the available actions");
  const Eigen::Index b = std::distance(ctx.actions.begin(), baseline_pos);

  for (Eigen::Index i = 0; i < features.rows(); ++i)
    radius_.register_feature_norm(features.row(i).norm());
  const double beta = current_beta();

  const Eigen::VectorXd baseline_feature = features.row(b).transpose();
  const bool cumulative = options_.mode == Mode::cumulative;

  // Whiten every arm feature in one triangular solve per metric; the
  // per-arm ellipsoid bounds then come from vector norms.
  const Eigen::MatrixXd whitened_constraint =
      constraint_posterior_.whiten_columns(features.transpose());
  const Eigen::VectorXd constraint_means =
      features * constraint_posterior_.mean();
  const Eigen::MatrixXd whitened_reward =
      reward_posterior_.whiten_columns(features.transpose());
  const Eigen::VectorXd reward_means = features * reward_posterior_.mean();

  double baseline_bound;  // R_t (cumulative) or the baseline UCB (instance)
  double slack = 0.0;     // alpha * max(min w^T theta, n * r_l)
  if (cumulative) {
    baseline_bound = constraint_posterior_
                         .extrema(acc_.baseline_on_deviation_sum +
                                      baseline_feature,
                                  beta)
                         .ucb;
    const double held_back =
        constraint_posterior_.extrema(acc_.baseline_on_baseline_sum, beta).lcb;
    slack = options_.alpha *
            std::max(held_back, static_cast<double>(acc_.baseline_plays) *
                                    options_.baseline_value_lower_bound);
  } else {
    baseline_bound =
        constraint_means(b) + beta * whitened_constraint.col(b).norm();
  }
  const double threshold = (1.0 - options_.alpha) * baseline_bound;

  const Eigen::VectorXd whitened_chosen_sum =
      cumulative ? constraint_posterior_.whiten(acc_.chosen_sum)
                 : Eigen::VectorXd::Zero(features.cols());
  const double chosen_sum_mean =
      cumulative ? acc_.chosen_sum.dot(constraint_posterior_.mean()) : 0.0;

  Decision decision;
  decision.baseline = ctx.baseline;
  decision.constraint_threshold = threshold;
  decision.reward_values.resize(ctx.actions.size());
  decision.constraint_values.resize(ctx.actions.size());

  int best = -1;
  double best_ucb = 0.0;
  for (std::size_t i = 0; i < ctx.actions.size(); ++i) {
    const Eigen::Index col = static_cast<Eigen::Index>(i);
    double lower;
    if (cumulative) {
      lower = chosen_sum_mean + constraint_means(col) -
              beta * (whitened_chosen_sum + whitened_constraint.col(col))
                         .norm() +
              slack;
    } else {
      lower = constraint_means(col) -
              beta * whitened_constraint.col(col).norm();
    }
    const double reward_ucb =
        reward_means(col) + beta * whitened_reward.col(col).norm();
    decision.constraint_values[i] = lower;
    decision.reward_values[i] = reward_ucb;

    const bool feasible = lower >= threshold || ctx.actions[i] == ctx.baseline;
    if (!feasible) continue;
    decision.feasible.push_back(ctx.actions[i]);
    if (best < 0 || reward_ucb > best_ucb ||
        (reward_ucb == best_ucb && ctx.actions[i] < best)) {
      best = ctx.actions[i];
      best_ucb = reward_ucb;
    }
  }
  decision.action = best;

  if (cumulative) {
    const auto chosen_pos =
        std::find(ctx.actions.begin(), ctx.actions.end(), decision.action);
    const Eigen::VectorXd chosen_feature =
        features.row(std::distance(ctx.actions.begin(), chosen_pos))
            .transpose();
    if (decision.action != ctx.baseline) {
      acc_.chosen_sum += chosen_feature;
      acc_.baseline_on_deviation_sum += baseline_feature;
    } else {
      acc_.baseline_on_baseline_sum += baseline_feature;
      ++acc_.baseline_plays;
    }
  }
  return decision;
}

void Clucb2Asc::observe(const StepContext& ctx, const Decision& decision,
                        const Outcome& outcome) {
  const auto pos =
      std::find(ctx.actions.begin(), ctx.actions.end(), decision.action);
  if (pos == ctx.actions.end())
    throw std::invalid_argument("Clucb2Asc::observe: unknown action");
  const Eigen::VectorXd x =
      ctx.features->row(std::distance(ctx.actions.begin(), pos)).transpose();
  reward_posterior_.update(x, outcome.reward);
  constraint_posterior_.update(x, outcome.constraint);
  ++steps_;
}

}  // namespace safebandit
