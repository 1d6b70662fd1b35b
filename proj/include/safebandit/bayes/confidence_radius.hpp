#pragma once

#include <cmath>
#include <stdexcept>

namespace safebandit {

/// Self-normalized confidence radius for ridge estimates:
///   beta_t = sigma * sqrt(d * ln((1 + t L^2 / lambda) / delta)) + sqrt(lambda) * S
/// where S bounds ||theta||_2 and L bounds the feature norms seen so far.
class ConfidenceRadius {
 public:
  ConfidenceRadius(double delta, double param_bound, double feature_bound)
      : delta_(delta), param_bound_(param_bound), feature_bound_(feature_bound) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("ConfidenceRadius: delta must be in (0, 1)");
    if (!(param_bound >= 0.0))
      throw std::invalid_argument("ConfidenceRadius: S must be >= 0");
    if (!(feature_bound >= 0.0))
      throw std::invalid_argument("ConfidenceRadius: L must be >= 0");
  }

  double beta(long t, double noise_std, double lambda, int dim) const {
    if (t < 0) throw std::invalid_argument("ConfidenceRadius::beta: t < 0");
    const double growth =
        1.0 + static_cast<double>(t) * feature_bound_ * feature_bound_ / lambda;
    return noise_std * std::sqrt(dim * std::log(growth / delta_)) +
           std::sqrt(lambda) * param_bound_;
  }

  /// Grows L as arms/features are registered. Never shrinks.
  void register_feature_norm(double norm) {
    if (norm > feature_bound_) feature_bound_ = norm;
  }

  double delta() const { return delta_; }
  double param_bound() const { return param_bound_; }
  double feature_bound() const { return feature_bound_; }

 private:
  double delta_;
  double param_bound_;
  double feature_bound_;
};

}  // namespace safebandit
