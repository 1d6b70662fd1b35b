#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "safebandit/rng.hpp"

namespace safebandit {

/// Ground-truth linear environment: K arms with fixed features, two metrics
/// with linear means and shared Gaussian noise, an instance-level constraint
/// parameter alpha, and a fixed baseline arm. Immutable after generation.
struct LinearConstraintProblem {
  Eigen::MatrixXd arm_features;   // K x d
  Eigen::VectorXd theta_reward;
  Eigen::VectorXd theta_constraint;
  double noise_std = 0.1;
  double spec_alpha = 0.0;
  int baseline_arm = 0;
  std::uint64_t seed = 0;

  int num_arms() const { return static_cast<int>(arm_features.rows()); }
  int dim() const { return static_cast<int>(arm_features.cols()); }

  double reward_mean(int arm) const {
    return arm_features.row(arm).dot(theta_reward);
  }
  double constraint_mean(int arm) const {
    return arm_features.row(arm).dot(theta_constraint);
  }

  /// Arms whose true constraint mean clears (1 - alpha) times the baseline's.
  std::vector<int> feasible_set(double alpha) const;

  /// Max true reward over feasible_set(alpha); the per-step regret reference.
  double optimal_feasible_reward(double alpha) const;

  /// Max true reward over all arms (the unconstrained reference).
  double optimal_reward() const;

  /// One noisy draw of both metrics for the given arm: reward first, then
  /// constraint.
  void sample_outcomes(int arm, Rng& rng, double& reward,
                       double& constraint) const;

  std::string to_json() const;
  static LinearConstraintProblem from_json(const std::string& text);

  struct InvariantReport {
    bool reward_means_positive = false;
    bool constraint_means_positive = false;
    bool tradeoff_holds = false;
    bool baseline_in_top30 = false;
    bool all() const {
      return reward_means_positive && constraint_means_positive &&
             tradeoff_holds && baseline_in_top30;
    }
  };
  InvariantReport check_invariants() const;
};

struct SyntheticSpec {
  std::uint64_t seed = 0;
  int num_arms = 100;
  int dim = 4;
  double noise_std = 0.1;
  double alpha = 0.0;
  long rejection_budget = 100000;
  int per_arm_budget = 1000;
};

struct GenerationStats {
  long positivity_reward_rejections = 0;
  long positivity_constraint_rejections = 0;
  long tradeoff_rejections = 0;
  long draws = 0;
};

/// Rejection-samples a problem until every arm has positive means under both
/// metrics and the best-reward arm is alpha-infeasible. Metric parameters
/// are iid N(0, I); arm features are iid random directions on the unit
/// sphere (normalized Gaussians), rejected per arm until both positivity
/// conditions hold. Deterministic per seed.
LinearConstraintProblem generate_synthetic(const SyntheticSpec& spec,
                                           GenerationStats* stats = nullptr);

/// Among the 30 arms with highest expected reward, returns the arm ranked
/// 20th-highest by expected constraint value (counting multiplicity); among
/// arms tied at that value, the lowest index wins.
int select_baseline(const Eigen::MatrixXd& arm_features,
                    const Eigen::VectorXd& theta_reward,
                    const Eigen::VectorXd& theta_constraint);

}  // namespace safebandit
