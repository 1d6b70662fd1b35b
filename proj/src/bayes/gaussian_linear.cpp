#include "safebandit/bayes/gaussian_linear.hpp"

#include <cmath>
#include <stdexcept>

namespace safebandit {

GaussianLinearPosterior::GaussianLinearPosterior(int dim, double lambda,
                                                 double noise_std)
    : dim_(dim), lambda_(lambda), noise_std_(noise_std) {
  if (dim < 1) throw std::invalid_argument("GaussianLinearPosterior: dim < 1");
  if (!(lambda > 0.0))
    throw std::invalid_argument("GaussianLinearPosterior: lambda must be > 0");
  if (!(noise_std > 0.0))
    throw std::invalid_argument(
        "GaussianLinearPosterior: noise_std must be > 0");
  precision_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
  moment_ = Eigen::VectorXd::Zero(dim);
  mean_ = Eigen::VectorXd::Zero(dim);
  refresh();
}

void GaussianLinearPosterior::update(const Eigen::VectorXd& x, double y) {
  if (x.size() != dim_)
    throw std::invalid_argument("GaussianLinearPosterior::update: dim mismatch");
  if (!x.allFinite() || !std::isfinite(y))
    throw std::invalid_argument(
        "GaussianLinearPosterior::update: non-finite input");
  precision_ += x * x.transpose();
  moment_ += x * y;
  ++count_;
  refresh();
}

void GaussianLinearPosterior::refresh() {
  factor_.compute(precision_);
  if (factor_.info() != Eigen::Success)
    throw std::runtime_error(
        "GaussianLinearPosterior: precision matrix lost positive definiteness");
  mean_ = factor_.solve(moment_);
}

Eigen::VectorXd GaussianLinearPosterior::sample(Rng& rng) const {
  Eigen::VectorXd z(dim_);
  for (int i = 0; i < dim_; ++i) z(i) = rng.normal();
  // V = L L^T, so theta_hat + sigma * L^{-T} z has covariance sigma^2 V^{-1}.
  return mean_ + noise_std_ * factor_.matrixU().solve(z);
}

GaussianLinearPosterior::Interval GaussianLinearPosterior::extrema(
    const Eigen::VectorXd& x, double beta) const {
  if (x.size() != dim_)
    throw std::invalid_argument(
        "GaussianLinearPosterior::extrema: dim mismatch");
  if (!(beta >= 0.0))
    throw std::invalid_argument("GaussianLinearPosterior::extrema: beta < 0");
  const double center = mean_.dot(x);
  const double spread = beta * factor_.matrixL().solve(x).norm();
  return {center - spread, center + spread};
}

double GaussianLinearPosterior::mean_at(const Eigen::VectorXd& x) const {
  return mean_.dot(x);
}

Eigen::VectorXd GaussianLinearPosterior::whiten(const Eigen::VectorXd& x) const {
  return factor_.matrixL().solve(x);
}

Eigen::MatrixXd GaussianLinearPosterior::whiten_columns(
    const Eigen::MatrixXd& columns) const {
  return factor_.matrixL().solve(columns);
}

}  // namespace safebandit
