#include "safebandit/evaluation/aggregate.hpp"

#include <cmath>
#include <stdexcept>

namespace safebandit {

TraceSummary TraceSummary::from_trace(const EpisodeTrace& trace,
                                      int normalized_window) {
  TraceSummary summary;
  summary.horizon = trace.horizon();
  summary.spec_alpha = trace.spec_alpha;
  for (auto& series : summary.metrics) series.reserve(trace.steps.size());
  for (const StepRecord& step : trace.steps) {
    summary.metrics[0].push_back(step.regret);
    summary.metrics[1].push_back(step.regret_unconstrained);
    summary.metrics[2].push_back(step.violation ? 1.0 : 0.0);
    summary.metrics[3].push_back(step.exp_constraint /
                                 step.exp_constraint_baseline);
  }
  if (trace.horizon() >= normalized_window) {
    summary.normalized_last_k =
        normalized_constraint_last_k(trace, normalized_window);
    summary.has_normalized_last_k = true;
  }
  return summary;
}

void AggregateSeries::add(const TraceSummary& summary) {
  if (horizon_ < 0) {
    horizon_ = summary.horizon;
    spec_alpha_ = summary.spec_alpha;
    for (int m = 0; m < kNumSeriesMetrics; ++m) {
      mean_[m].assign(horizon_, 0.0);
      m2_[m].assign(horizon_, 0.0);
    }
  }
  if (summary.horizon != horizon_)
    throw std::invalid_argument(
        "AggregateSeries::add: traces disagree on the horizon");
  if (summary.spec_alpha != spec_alpha_)
    throw std::invalid_argument(
        "AggregateSeries::add: traces disagree on spec alpha");

  ++count_;
  for (int m = 0; m < kNumSeriesMetrics; ++m) {
    const std::vector<double>& values = summary.metrics[m];
    for (int i = 0; i < horizon_; ++i) {
      const double delta = values[i] - mean_[m][i];
      mean_[m][i] += delta / count_;
      m2_[m][i] += delta * (values[i] - mean_[m][i]);
    }
  }
  if (summary.has_normalized_last_k) {
    ++scalar_count_;
    const double delta = summary.normalized_last_k - scalar_mean_;
    scalar_mean_ += delta / scalar_count_;
    scalar_m2_ += delta * (summary.normalized_last_k - scalar_mean_);
  }
}

namespace {
double sem_from(double m2, int count) {
  if (count < 2) return 0.0;
  const double variance = m2 / (count - 1);
  return std::sqrt(variance / count);
}
}  // namespace

MeanSem AggregateSeries::at(int metric, int step_index) const {
  return {mean_[metric][step_index], sem_from(m2_[metric][step_index], count_)};
}

std::vector<double> AggregateSeries::means(int metric) const {
  return mean_[metric];
}

std::vector<double> AggregateSeries::sems(int metric) const {
  std::vector<double> out(horizon_ < 0 ? 0 : horizon_);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = sem_from(m2_[metric][i], count_);
  return out;
}

MeanSem AggregateSeries::normalized_last_k() const {
  return {scalar_mean_, sem_from(scalar_m2_, scalar_count_)};
}

AggregateSeries aggregate(const std::vector<EpisodeTrace>& traces,
                          int normalized_window) {
  if (traces.empty())
    throw std::invalid_argument("aggregate: no traces supplied");
  AggregateSeries series;
  for (const EpisodeTrace& trace : traces)
    series.add(TraceSummary::from_trace(trace, normalized_window));
  return series;
}

}  // namespace safebandit
