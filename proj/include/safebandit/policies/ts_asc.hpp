#pragma once

#include <memory>

#include "safebandit/bayes/gaussian_linear.hpp"
#include "safebandit/bayes/laplace_logistic.hpp"
#include "safebandit/policies/policy.hpp"
#include "safebandit/problems/transcode.hpp"

namespace safebandit {

/// Thompson sampling with an instance-level auxiliary safety constraint over
/// two independent linear-Gaussian metric models. Each step one parameter
/// vector is drawn per metric, actions whose sampled constraint value falls
/// below (1 - alpha) times the baseline's sampled value are filtered out
/// (the baseline itself always stays feasible), and the sampled-reward
/// argmax of the remainder is played. Disabling the filter gives vanilla
/// Thompson sampling.
class TsAscLinear : public Policy {
 public:
  struct Options {
    double alpha = 0.0;
    bool constraint_filter = true;
  };

  TsAscLinear(int dim, double lambda, double noise_std, Options options);

  Decision select(const StepContext& ctx, Rng& rng) override;
  void observe(const StepContext& ctx, const Decision& decision,
               const Outcome& outcome) override;
  long step_count() const override { return steps_; }

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
  long steps_ = 0;
};

inline std::unique_ptr<TsAscLinear> make_vanilla_ts(int dim, double lambda,
                                                    double noise_std) {
  return std::make_unique<TsAscLinear>(
      dim, lambda, noise_std, TsAscLinear::Options{0.0, false});
}

/// TS-ASC over a single Bernoulli success model (the transcode setting).
/// The success outcome is the constraint metric and the reward is
/// deterministic given success, so one sampled model supplies both:
/// constraint = p_tilde(x, a), reward = p_tilde(x, a) * cumulative offset.
class TsAscBernoulli : public Policy {
 public:
  struct Options {
    double alpha = 0.0;
    bool constraint_filter = true;
    int refit_max_iter = 50;
    double refit_grad_tol = 1e-6;
  };

  TsAscBernoulli(int feature_dim, double lambda, RewardShape shape,
                 Options options);

  Decision select(const StepContext& ctx, Rng& rng) override;
  void observe(const StepContext& ctx, const Decision& decision,
               const Outcome& outcome) override;
  long step_count() const override { return steps_; }

  const LaplaceLogisticPosterior& posterior() const { return model_; }

 private:
  Options options_;
  RewardShape shape_;
  LaplaceLogisticPosterior model_;
  long steps_ = 0;
};

}  // namespace safebandit
