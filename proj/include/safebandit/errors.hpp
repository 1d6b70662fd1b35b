#pragma once

#include <stdexcept>
#include <string>

namespace safebandit {

/// Optimizer failed to reach the gradient tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual_norm)
      : std::runtime_error(what), residual_norm_(residual_norm) {}

  double residual_norm() const { return residual_norm_; }

 private:
  double residual_norm_;
};

/// Problem generator exhausted its rejection budget.
class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, long positivity_reward_rejections,
                  long positivity_constraint_rejections,
                  long tradeoff_rejections)
      : std::runtime_error(what),
        positivity_reward_rejections_(positivity_reward_rejections),
        positivity_constraint_rejections_(positivity_constraint_rejections),
        tradeoff_rejections_(tradeoff_rejections) {}

  long positivity_reward_rejections() const {
    return positivity_reward_rejections_;
  }
  long positivity_constraint_rejections() const {
    return positivity_constraint_rejections_;
  }
  long tradeoff_rejections() const { return tradeoff_rejections_; }

 private:
  long positivity_reward_rejections_;
  long positivity_constraint_rejections_;
  long tradeoff_rejections_;
};

}  // namespace safebandit
