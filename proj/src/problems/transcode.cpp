#include "safebandit/problems/transcode.hpp"

#include <cmath>
#include <stdexcept>

#include "safebandit/bayes/laplace_logistic.hpp"

namespace safebandit {

void RewardShape::validate() const {
  if (offsets[0] != 1.0)
    throw std::invalid_argument("RewardShape: omega_360p is fixed at 1");
  const std::array<double, kNumQualities> upper = {1.0, 0.05, 0.04, 0.03};
  for (int a = 1; a < kNumQualities; ++a)
    if (!(offsets[a] > 0.0 && offsets[a] <= upper[a]))
      throw std::invalid_argument(
          std::string("RewardShape: omega_") + kQualityNames[a] +
          " outside (0, " + std::to_string(upper[a]) + "]");
  if (!(alpha >= 0.0 && alpha <= 0.06))
    throw std::invalid_argument("RewardShape: alpha outside [0, 0.06]");
}

namespace {
double softplus(double z) {
  if (z > 30.0) return z;
  return std::log1p(std::exp(z));
}
}  // namespace

TranscodeProblem TranscodeProblem::generate(std::uint64_t seed,
                                            int context_dim) {
  if (context_dim < 1)
    throw std::invalid_argument("TranscodeProblem: context_dim < 1");
  TranscodeProblem problem;
  problem.context_dim_ = context_dim;
  problem.seed_ = seed;

  Rng rng(seed);
  const auto draw_direction = [&](double norm) {
    Eigen::VectorXd v(context_dim);
    for (int i = 0; i < context_dim; ++i) v(i) = rng.normal();
    return (norm / v.norm()) * v;
  };
  problem.gain_weights_ = draw_direction(0.7);
  problem.cost_weights_ = draw_direction(0.9);
  return problem;
}

double TranscodeProblem::success_prob(const Eigen::VectorXd& context,
                                      int action) const {
  if (action < 0 || action >= kNumQualities)
    throw std::invalid_argument("TranscodeProblem: action out of range");
  const double gain = gain_bias_ + gain_weights_.dot(context);
  const double cost = softplus(cost_bias_ + cost_weights_.dot(context));
  return logistic(gain - size_scores_[action] * cost);
}

TranscodeProblem::Step TranscodeProblem::step(Rng& rng) const {
  Step s;
  s.context.resize(context_dim_);
  for (int i = 0; i < context_dim_; ++i) s.context(i) = rng.normal();
  s.source_quality = static_cast<int>(rng.uniform_int(kNumQualities));
  for (int a = 0; a <= s.source_quality; ++a) s.actions.push_back(a);
  return s;
}

int TranscodeProblem::baseline_action(const Eigen::VectorXd& context,
                                      int source_quality) const {
  for (int a = source_quality; a > 0; --a)
    if (success_prob(context, a) >= reliability_floor_) return a;
  return 0;
}

TranscodeProblem::Outcome TranscodeProblem::outcome(
    const Eigen::VectorXd& context, int action, const RewardShape& shape,
    Rng& rng) const {
  const double p = success_prob(context, action);
  const int success = rng.uniform() < p ? 1 : 0;
  Outcome out;
  out.success = success;
  out.constraint = static_cast<double>(success);
  out.reward = success ? shape.cumulative_reward(action) : 0.0;
  return out;
}

Eigen::VectorXd TranscodeProblem::features(const Eigen::VectorXd& context,
                                           int action) const {
  Eigen::VectorXd phi(feature_dim());
  phi.head(context_dim_) = context;
  phi.segment(context_dim_, kNumQualities).setZero();
  phi(context_dim_ + action) = 1.0;
  phi.tail(context_dim_) = size_scores_[action] * context;
  return phi;
}

}  // namespace safebandit
