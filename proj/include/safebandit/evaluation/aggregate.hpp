#pragma once

#include <string>
#include <vector>

#include "safebandit/evaluation/trace.hpp"

namespace safebandit {

inline constexpr int kNumSeriesMetrics = 4;
inline constexpr const char* kSeriesMetricNames[kNumSeriesMetrics] = {
    "regret", "regret_unconstrained", "violation", "normalized_constraint"};

/// Compact per-realization view of a trace: one value per step for each
/// aggregated metric, plus the last-100-steps normalized constraint scalar.
struct TraceSummary {
  int horizon = 0;
  double spec_alpha = 0.0;
  std::vector<double> metrics[kNumSeriesMetrics];
  double normalized_last_k = 0.0;
  bool has_normalized_last_k = false;

  static TraceSummary from_trace(const EpisodeTrace& trace,
                                 int normalized_window = 100);
};

struct MeanSem {
  double mean = 0.0;
  double sem = 0.0;
};

/// Per-step mean and standard error of the mean across realizations.
/// Realizations are merged strictly in index order, so the result is
/// bit-identical no matter how many workers produced the summaries.
class AggregateSeries {
 public:
  AggregateSeries() = default;

  void add(const TraceSummary& summary);

  int realizations() const { return count_; }
  int horizon() const { return horizon_; }

  MeanSem at(int metric, int step_index) const;
  std::vector<double> means(int metric) const;
  std::vector<double> sems(int metric) const;

  /// Aggregate of the per-trace normalized-constraint scalar.
  MeanSem normalized_last_k() const;

 private:
  int count_ = 0;
  int horizon_ = -1;
  double spec_alpha_ = 0.0;
  // Welford accumulators, one (mean, M2) pair per metric per step.
  std::vector<double> mean_[kNumSeriesMetrics];
  std::vector<double> m2_[kNumSeriesMetrics];
  double scalar_mean_ = 0.0;
  double scalar_m2_ = 0.0;
  int scalar_count_ = 0;
};

/// Batch form of the accumulator above; traces must share horizon and
/// spec alpha.
AggregateSeries aggregate(const std::vector<EpisodeTrace>& traces,
                          int normalized_window = 100);

}  // namespace safebandit
