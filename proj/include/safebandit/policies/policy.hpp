#pragma once

#include <Eigen/Dense>
#include <vector>

#include "safebandit/rng.hpp"

namespace safebandit {

/// What a policy sees each step: one feature row per available action
/// (row i describes actions[i]) and the baseline policy's action.
struct StepContext {
  const Eigen::MatrixXd* features = nullptr;
  std::vector<int> actions;
  int baseline = 0;
};

/// Immutable record of one selection, kept for logging and audit.
struct Decision {
  int action = 0;
  int baseline = 0;
  std::vector<int> feasible;             // action ids that passed the filter
  std::vector<double> reward_values;     // per available action
  std::vector<double> constraint_values; // per available action
  double constraint_threshold = 0.0;     // value the filter compared against
};

struct Outcome {
  double reward = 0.0;
  double constraint = 0.0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual Decision select(const StepContext& ctx, Rng& rng) = 0;
  virtual void observe(const StepContext& ctx, const Decision& decision,
                       const Outcome& outcome) = 0;
  virtual long step_count() const = 0;
};

/// Filter-then-argmax decision rule shared by the sampling policies:
/// feasible = {a : constraint_values[a] >= (1 - alpha) * value at baseline}
/// united with the baseline, then argmax of reward_values over the feasible
/// set, ties to the lowest action id. With the filter disabled every action
/// is feasible.
Decision select_from_values(const std::vector<double>& reward_values,
                            const std::vector<double>& constraint_values,
                            const std::vector<int>& actions, int baseline,
                            double alpha, bool constraint_filter);

/// Always returns the baseline action; never learns.
class BaselinePolicy : public Policy {
 public:
  Decision select(const StepContext& ctx, Rng& rng) override;
  void observe(const StepContext&, const Decision&, const Outcome&) override {
    ++steps_;
  }
  long step_count() const override { return steps_; }

 private:
  long steps_ = 0;
};

}  // namespace safebandit
