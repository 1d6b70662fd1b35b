#pragma once

#include <Eigen/Dense>

#include "safebandit/rng.hpp"

namespace safebandit {

/// Conjugate Bayesian ridge model with known observation noise.
///
/// Maintains the precision V_t = lambda*I + sum_i x_i x_i^T and the moment
/// b_t = sum_i x_i y_i, with posterior theta | data ~ N(theta_hat,
/// sigma^2 V_t^{-1}) where theta_hat = V_t^{-1} b_t. V_t is refactored by
/// Cholesky after every update; no rank-one inverse shortcuts.
class GaussianLinearPosterior {
 public:
  struct Interval {
    double lcb;
    double ucb;
  };

  GaussianLinearPosterior(int dim, double lambda, double noise_std);

  /// Folds one observation (x, y) into the posterior.
  void update(const Eigen::VectorXd& x, double y);

  /// Draws theta ~ N(theta_hat, sigma^2 V_t^{-1}).
  Eigen::VectorXd sample(Rng& rng) const;

  /// Closed-form extrema of x^T theta over the confidence ellipsoid
  /// {theta : ||theta - theta_hat||_{V_t} <= beta}.
  Interval extrema(const Eigen::VectorXd& x, double beta) const;

  double mean_at(const Eigen::VectorXd& x) const;

  /// L^{-1} x for the current factor V = L L^T, so that
  /// x^T V^{-1} x = ||whiten(x)||^2. The matrix overload whitens each
  /// column in one triangular solve.
  Eigen::VectorXd whiten(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd whiten_columns(const Eigen::MatrixXd& columns) const;

  int dim() const { return dim_; }
  double lambda() const { return lambda_; }
  double noise_std() const { return noise_std_; }
  long count() const { return count_; }
  const Eigen::MatrixXd& precision() const { return precision_; }
  const Eigen::VectorXd& moment() const { return moment_; }
  const Eigen::VectorXd& mean() const { return mean_; }

 private:
  void refresh();

  int dim_;
  double lambda_;
  double noise_std_;
  Eigen::MatrixXd precision_;
  Eigen::VectorXd moment_;
  Eigen::VectorXd mean_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  long count_ = 0;
};

}  // namespace safebandit
