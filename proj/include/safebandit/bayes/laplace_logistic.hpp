#pragma once

#include <Eigen/Dense>
#include <vector>

#include "safebandit/rng.hpp"

namespace safebandit {

/// Stable logistic function.
inline double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Bayesian logistic model with a Gaussian (Laplace) posterior approximation.
///
/// The MAP weights maximize
///   sum_i [y_i log p_i + (1 - y_i) log(1 - p_i)] - (lambda / 2) ||theta||^2
/// and the posterior is N(theta_star, H^{-1}) with
/// H = lambda*I + sum_i p_i (1 - p_i) x_i x_i^T evaluated at theta_star.
/// Before any data the model is the prior: theta_star = 0, H = lambda*I.
class LaplaceLogisticPosterior {
 public:
  LaplaceLogisticPosterior(int dim, double lambda);

  /// Buffers one binary observation; fit() folds the buffer into the MAP.
  void add(const Eigen::VectorXd& x, int y);

  /// Damped Newton ascent on the MAP objective, warm-started from the
  /// current theta_star. Throws ConvergenceError if the gradient norm does
  /// not reach grad_tol within max_iter iterations.
  void fit(int max_iter = 100, double grad_tol = 1e-6);

  /// Draws theta ~ N(theta_star, H^{-1}) and returns logistic(x^T theta),
  /// clamped to the open interval (0, 1).
  double sample_prob(const Eigen::VectorXd& x, Rng& rng) const;

  Eigen::VectorXd sample(Rng& rng) const;
  double map_prob(const Eigen::VectorXd& x) const;

  /// MAP objective and its gradient at an arbitrary theta (used by the
  /// finite-difference checks).
  double log_posterior(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  long observation_count() const { return static_cast<long>(ys_.size()); }
  bool fitted() const { return fitted_; }
  const Eigen::VectorXd& map_weights() const { return theta_star_; }
  /// Negative Hessian of the log posterior at theta_star (SPD).
  const Eigen::MatrixXd& curvature() const { return curvature_; }

 private:
  int dim_;
  double lambda_;
  std::vector<Eigen::VectorXd> xs_;
  std::vector<int> ys_;
  Eigen::VectorXd theta_star_;
  Eigen::MatrixXd curvature_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  bool fitted_ = false;
};

}  // namespace safebandit
