#include "safebandit/evaluation/trace.hpp"

#include <stdexcept>

namespace safebandit {

std::vector<double> violation_moving_average(const EpisodeTrace& trace,
                                             int window) {
  const int horizon = trace.horizon();
  if (window < 1)
    throw std::invalid_argument("violation_moving_average: window < 1");
  if (window > horizon)
    throw std::invalid_argument(
        "violation_moving_average: window exceeds the horizon");
  std::vector<double> series;
  series.reserve(horizon - window + 1);
  long sum = 0;
  for (int i = 0; i < horizon; ++i) {
    sum += trace.steps[i].violation ? 1 : 0;
    if (i >= window) sum -= trace.steps[i - window].violation ? 1 : 0;
    if (i >= window - 1)
      series.push_back(static_cast<double>(sum) / window);
  }
  return series;
}

double normalized_constraint_last_k(const EpisodeTrace& trace, int k) {
  const int horizon = trace.horizon();
  if (k < 1) throw std::invalid_argument("normalized_constraint_last_k: k < 1");
  if (horizon < k)
    throw std::invalid_argument(
        "normalized_constraint_last_k: horizon shorter than k");
  double total = 0.0;
  for (int i = horizon - k; i < horizon; ++i)
    total += trace.steps[i].exp_constraint /
             trace.steps[i].exp_constraint_baseline;
  return total / k;
}

}  // namespace safebandit
