#include "safebandit/bayes/laplace_logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "safebandit/errors.hpp"

namespace safebandit {

namespace {
constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}
}  // namespace

LaplaceLogisticPosterior::LaplaceLogisticPosterior(int dim, double lambda)
    : dim_(dim), lambda_(lambda) {
  if (dim < 1) throw std::invalid_argument("LaplaceLogisticPosterior: dim < 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument(
        "LaplaceLogisticPosterior: lambda must be > 0");
  theta_star_ = Eigen::VectorXd::Zero(dim);
  curvature_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
  factor_.compute(curvature_);
}

void LaplaceLogisticPosterior::add(const Eigen::VectorXd& x, int y) {
  if (x.size() != dim_)
    throw std::invalid_argument("LaplaceLogisticPosterior::add: dim mismatch");
  if (!x.allFinite())
    throw std::invalid_argument(
        "LaplaceLogisticPosterior::add: non-finite feature");
  if (y != 0 && y != 1)
    throw std::invalid_argument(
        "LaplaceLogisticPosterior::add: outcome must be 0 or 1");
  xs_.push_back(x);
  ys_.push_back(y);
}

double LaplaceLogisticPosterior::log_posterior(
    const Eigen::VectorXd& theta) const {
  double value = -0.5 * lambda_ * theta.squaredNorm();
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double p = clamp_prob(logistic(xs_[i].dot(theta)));
    value += ys_[i] ? std::log(p) : std::log(1.0 - p);
  }
  return value;
}

Eigen::VectorXd LaplaceLogisticPosterior::gradient(
    const Eigen::VectorXd& theta) const {
  Eigen::VectorXd grad = -lambda_ * theta;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double p = logistic(xs_[i].dot(theta));
    grad += (static_cast<double>(ys_[i]) - p) * xs_[i];
  }
  return grad;
}

void LaplaceLogisticPosterior::fit(int max_iter, double grad_tol) {
  if (xs_.empty())
    throw std::logic_error(
        "LaplaceLogisticPosterior::fit: no observations buffered");

  Eigen::VectorXd theta = theta_star_;
  double objective = log_posterior(theta);
  double grad_norm = gradient(theta).norm();

  for (int iter = 0; iter < max_iter && grad_norm > grad_tol; ++iter) {
    Eigen::MatrixXd hess = lambda_ * Eigen::MatrixXd::Identity(dim_, dim_);
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      const double p = logistic(xs_[i].dot(theta));
      hess.noalias() += (p * (1.0 - p)) * xs_[i] * xs_[i].transpose();
    }
    const Eigen::VectorXd grad = gradient(theta);
    const Eigen::VectorXd step = hess.llt().solve(grad);

    // Backtracking keeps the concave objective from overshooting.
    double scale = 1.0;
    Eigen::VectorXd candidate = theta + scale * step;
    double candidate_objective = log_posterior(candidate);
    for (int halvings = 0;
         candidate_objective < objective && halvings < 40; ++halvings) {
      scale *= 0.5;
      candidate = theta + scale * step;
      candidate_objective = log_posterior(candidate);
    }
    theta = candidate;
    objective = candidate_objective;
    grad_norm = gradient(theta).norm();
  }

  if (grad_norm > grad_tol)
    throw ConvergenceError(
        "LaplaceLogisticPosterior::fit: Newton did not converge, "
        "gradient norm " + std::to_string(grad_norm),
        grad_norm);

  theta_star_ = theta;
  curvature_ = lambda_ * Eigen::MatrixXd::Identity(dim_, dim_);
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    const double p = clamp_prob(logistic(xs_[i].dot(theta_star_)));
    curvature_.noalias() += (p * (1.0 - p)) * xs_[i] * xs_[i].transpose();
  }
  factor_.compute(curvature_);
  if (factor_.info() != Eigen::Success)
    throw std::runtime_error(
        "LaplaceLogisticPosterior::fit: curvature not positive definite");
  fitted_ = true;
}

Eigen::VectorXd LaplaceLogisticPosterior::sample(Rng& rng) const {
  Eigen::VectorXd z(dim_);
  for (int i = 0; i < dim_; ++i) z(i) = rng.normal();
  return theta_star_ + factor_.matrixU().solve(z);
}

double LaplaceLogisticPosterior::sample_prob(const Eigen::VectorXd& x,
                                             Rng& rng) const {
  if (x.size() != dim_)
    throw std::invalid_argument(
        "LaplaceLogisticPosterior::sample_prob: dim mismatch");
  return clamp_prob(logistic(x.dot(sample(rng))));
}

double LaplaceLogisticPosterior::map_prob(const Eigen::VectorXd& x) const {
  return clamp_prob(logistic(x.dot(theta_star_)));
}

}  // namespace safebandit
