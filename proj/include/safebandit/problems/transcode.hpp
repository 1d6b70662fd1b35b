#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "safebandit/rng.hpp"

namespace safebandit {

inline constexpr int kNumQualities = 4;
inline constexpr std::array<const char*, kNumQualities> kQualityNames = {
    "360p", "480p", "720p", "1080p"};

/// Additive reward offsets per quality plus the policy-side alpha; the
/// tuning search optimizes over these.
struct RewardShape {
  double alpha = 0.0;
  std::array<double, kNumQualities> offsets = {1.0, 0.05, 0.04, 0.03};

  /// Reward paid on success at `action`: sum of offsets up to that quality.
  double cumulative_reward(int action) const {
    double total = 0.0;
    for (int a = 0; a <= action; ++a) total += offsets[a];
    return total;
  }

  /// Enforces the tuning bounds: omega_360p fixed at 1, the remaining
  /// offsets in (0, 0.05] / (0, 0.04] / (0, 0.03], alpha in [0, 0.06].
  void validate() const;
};

/// Synthetic stand-in for the video upload environment. A context vector is
/// drawn per step together with a source quality; actions above the source
/// quality are unavailable. The true success probability is
///   logistic(g(x) - s_a * softplus(h(x)))
/// with linear g, h, so reliability strictly decreases with quality for
/// every context.
class TranscodeProblem {
 public:
  struct Step {
    Eigen::VectorXd context;
    int source_quality;
    std::vector<int> actions;  // 0..source_quality
  };

  struct Outcome {
    int success;
    double reward;
    double constraint;
  };

  static TranscodeProblem generate(std::uint64_t seed, int context_dim = 8);

  Step step(Rng& rng) const;

  double success_prob(const Eigen::VectorXd& context, int action) const;

  /// Frozen status-quo heuristic: the highest available action whose true
  /// success probability is at least the reliability floor, else 360p.
  int baseline_action(const Eigen::VectorXd& context, int source_quality) const;

  Outcome outcome(const Eigen::VectorXd& context, int action,
                  const RewardShape& shape, Rng& rng) const;

  /// Agent-side features for the Bernoulli constraint model:
  /// [context ; onehot(action) ; size_score(action) * context].
  Eigen::VectorXd features(const Eigen::VectorXd& context, int action) const;
  int feature_dim() const { return 2 * context_dim_ + kNumQualities; }

  int context_dim() const { return context_dim_; }
  double size_score(int action) const { return size_scores_[action]; }
  double reliability_floor() const { return reliability_floor_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int context_dim_ = 8;
  std::array<double, kNumQualities> size_scores_ = {0.5, 1.0, 1.7, 2.6};
  double gain_bias_ = 3.6;
  Eigen::VectorXd gain_weights_;
  double cost_bias_ = 0.2;
  Eigen::VectorXd cost_weights_;
  double reliability_floor_ = 0.9;
  std::uint64_t seed_ = 0;
};

}  // namespace safebandit
