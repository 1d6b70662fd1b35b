#pragma once

#include "safebandit/bayes/confidence_radius.hpp"
#include "safebandit/bayes/gaussian_linear.hpp"
#include "safebandit/policies/policy.hpp"

namespace safebandit {

/// Conservative UCB with the safety requirement moved onto the auxiliary
/// metric. Two modes share the machinery:
///
/// cumulative — candidate a' is feasible when
///   min over the constraint ellipsoid of (z + x_a')^T theta
///     + alpha * max(min over the ellipsoid of w^T theta, n * r_l)
///   >= (1 - alpha) * max over the ellipsoid of (v + x_b)^T theta,
/// where z sums the features of past non-baseline plays, v sums baseline
/// features over those same steps, w sums baseline features over baseline
/// plays, n counts baseline plays, and r_l is a known lower bound on the
/// baseline's expected constraint value.
///
/// instance — per-step bounds only: feasible when the candidate's constraint
/// LCB clears (1 - alpha) times the baseline's constraint UCB.
///
/// Either way the baseline starts feasible and the feasible action with the
/// highest reward UCB is played.
class Clucb2Asc : public Policy {
 public:
  enum class Mode { cumulative, instance };

  struct Options {
    double alpha = 0.0;
    Mode mode = Mode::cumulative;
    double baseline_value_lower_bound = 0.0;  // r_l
    double delta = 0.001;
    double param_bound = 0.0;    // S; 0 means the 3*sqrt(d) default
    double feature_bound = 0.0;  // L; grows as features are seen
  };

  struct Accumulators {
    long baseline_plays = 0;          // n
    Eigen::VectorXd chosen_sum;       // z
    Eigen::VectorXd baseline_on_baseline_sum;  // w
    Eigen::VectorXd baseline_on_deviation_sum; // v
  };

  Clucb2Asc(int dim, double lambda, double noise_std, Options options);

  Decision select(const StepContext& ctx, Rng& rng) override;
  void observe(const StepContext& ctx, const Decision& decision,
               const Outcome& outcome) override;
  long step_count() const override { return steps_; }

  double current_beta() const;
  const Accumulators& accumulators() const { return acc_; }
  const GaussianLinearPosterior& reward_posterior() const {
    return reward_posterior_;
  }
  const GaussianLinearPosterior& constraint_posterior() const {
    return constraint_posterior_;
  }

 private:
  Options options_;
  GaussianLinearPosterior reward_posterior_;
  GaussianLinearPosterior constraint_posterior_;
  ConfidenceRadius radius_;
  Accumulators acc_;
  long steps_ = 0;
};

}  // namespace safebandit
