#include "safebandit/tuning/tuning.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "safebandit/evaluation/export.hpp"
#include "safebandit/evaluation/parallel.hpp"
#include "safebandit/evaluation/runner.hpp"
#include "safebandit/policies/ts_asc.hpp"

namespace safebandit {

namespace {

struct ReplicationMetrics {
  double quality = 0.0;
  double reliability = 0.0;
};

ReplicationMetrics measure(const EpisodeTrace& trace, int eval_window) {
  const int horizon = trace.horizon();
  const int start = horizon - eval_window;
  long sources_1080p = 0, preserved_1080p = 0, successes = 0;
  for (int i = start; i < horizon; ++i) {
    const StepRecord& step = trace.steps[i];
    if (step.constraint > 0.5) ++successes;
    if (step.source_quality == kNumQualities - 1) {
      ++sources_1080p;
      if (step.action == kNumQualities - 1 && step.constraint > 0.5)
        ++preserved_1080p;
    }
  }
  ReplicationMetrics metrics;
  metrics.quality = sources_1080p > 0
                        ? static_cast<double>(preserved_1080p) / sources_1080p
                        : 0.0;
  metrics.reliability = static_cast<double>(successes) / eval_window;
  return metrics;
}

std::unique_ptr<Policy> make_transcode_policy(const TranscodeProblem& problem,
                                              const RewardShape& shape,
                                              double lambda,
                                              TranscodePolicyKind kind) {
  switch (kind) {
    case TranscodePolicyKind::ts_asc:
      return std::make_unique<TsAscBernoulli>(
          problem.feature_dim(), lambda, shape,
          TsAscBernoulli::Options{shape.alpha, true});
    case TranscodePolicyKind::vanilla_ts:
      return std::make_unique<TsAscBernoulli>(
          problem.feature_dim(), lambda, shape,
          TsAscBernoulli::Options{0.0, false});
    case TranscodePolicyKind::baseline:
      return std::make_unique<BaselinePolicy>();
  }
  throw std::logic_error("make_transcode_policy: unreachable");
}

}  // namespace

ConfigEvaluation evaluate_config(const TranscodeProblem& problem,
                                 const RewardShape& shape,
                                 const EvalOptions& options,
                                 TranscodePolicyKind kind) {
  if (options.replications < 2)
    throw std::invalid_argument("evaluate_config: replications must be >= 2");
  if (options.eval_window < 1 || options.eval_window > options.horizon)
    throw std::invalid_argument(
        "evaluate_config: eval_window must be in [1, horizon]");

  ConfigEvaluation evaluation;
  evaluation.shape = shape;
  evaluation.replications = options.replications;

  std::vector<ReplicationMetrics> metrics(options.replications);
  const auto run_replication = [&](int j) {
    std::unique_ptr<Policy> policy =
        make_transcode_policy(problem, shape, options.lambda, kind);
    Rng rng(mix_seed(options.master_seed, j));
    const EpisodeTrace trace = run_transcode_episode(
        problem, *policy, shape, options.horizon, rng);
    return measure(trace, options.eval_window);
  };
  const std::function<void(int, ReplicationMetrics&&)> collect =
      [&](int j, ReplicationMetrics&& m) { metrics[j] = m; };
  parallel_for_ordered<ReplicationMetrics>(options.replications,
                                           options.workers, run_replication,
                                           collect);

  double quality_sum = 0.0, reliability_sum = 0.0;
  for (int j = 0; j < options.replications; ++j) {
    evaluation.seeds.push_back(mix_seed(options.master_seed, j));
    quality_sum += metrics[j].quality;
    reliability_sum += metrics[j].reliability;
  }
  evaluation.quality_mean = quality_sum / options.replications;
  evaluation.reliability_mean = reliability_sum / options.replications;

  double quality_sq = 0.0, reliability_sq = 0.0;
  for (const ReplicationMetrics& m : metrics) {
    quality_sq += (m.quality - evaluation.quality_mean) *
                  (m.quality - evaluation.quality_mean);
    reliability_sq += (m.reliability - evaluation.reliability_mean) *
                      (m.reliability - evaluation.reliability_mean);
  }
  const int n = options.replications;
  evaluation.quality_sem = std::sqrt(quality_sq / (n - 1) / n);
  evaluation.reliability_sem = std::sqrt(reliability_sq / (n - 1) / n);
  return evaluation;
}

SearchResult constrained_search(const TranscodeProblem& problem,
                                const SearchSpace& space, int budget,
                                const EvalOptions& options) {
  if (budget < 1)
    throw std::invalid_argument("constrained_search: budget must be >= 1");

  std::vector<RewardShape> candidates;
  if (space.random) {
    Rng rng(mix_seed(space.random_seed, 0x5ea5c4));
    for (int i = 0; i < budget; ++i) {
      RewardShape shape;
      shape.alpha = 0.06 * rng.uniform();
      shape.offsets = {1.0, 0.05 * std::max(rng.uniform(), 1e-6),
                       0.04 * std::max(rng.uniform(), 1e-6),
                       0.03 * std::max(rng.uniform(), 1e-6)};
      candidates.push_back(shape);
    }
  } else {
    for (double alpha : space.alphas)
      for (double w480 : space.offsets_480p)
        for (double w720 : space.offsets_720p)
          for (double w1080 : space.offsets_1080p) {
            if (static_cast<int>(candidates.size()) >= budget) break;
            RewardShape shape;
            shape.alpha = alpha;
            shape.offsets = {1.0, w480, w720, w1080};
            candidates.push_back(shape);
          }
  }
  if (static_cast<int>(candidates.size()) > budget) candidates.resize(budget);
  for (const RewardShape& shape : candidates) shape.validate();

  SearchResult result;
  RewardShape baseline_shape;  // offsets are irrelevant to the baseline
  result.baseline = evaluate_config(problem, baseline_shape, options,
                                    TranscodePolicyKind::baseline);

  for (const RewardShape& shape : candidates)
    result.frontier.push_back(evaluate_config(problem, shape, options,
                                              TranscodePolicyKind::ts_asc));

  double best_quality = 0.0;
  double least_violation = 0.0;
  for (std::size_t i = 0; i < result.frontier.size(); ++i) {
    ConfigEvaluation& eval = result.frontier[i];
    const double pooled_sem =
        std::sqrt(eval.reliability_sem * eval.reliability_sem +
                  result.baseline.reliability_sem *
                      result.baseline.reliability_sem);
    const double slack_floor =
        result.baseline.reliability_mean - pooled_sem;
    eval.feasible = eval.reliability_mean >= slack_floor;
    const double violation = slack_floor - eval.reliability_mean;
    if (eval.feasible &&
        (result.best_index < 0 || eval.quality_mean > best_quality)) {
      result.best_index = static_cast<int>(i);
      best_quality = eval.quality_mean;
    }
    if (result.least_violating_index < 0 || violation < least_violation) {
      result.least_violating_index = static_cast<int>(i);
      least_violation = violation;
    }
  }
  result.all_infeasible = result.best_index < 0;
  return result;
}

void export_frontier_csv(const SearchResult& result,
                         const std::filesystem::path& path,
                         const std::string& config_fingerprint) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());
  out << "# config=" << config_fingerprint << "\n";
  out << "alpha,omega_480p,omega_720p,omega_1080p,quality_mean,quality_sem,"
         "reliability_mean,reliability_sem,feasible\n";
  for (const ConfigEvaluation& eval : result.frontier) {
    out << format_double(eval.shape.alpha) << ','
        << format_double(eval.shape.offsets[1]) << ','
        << format_double(eval.shape.offsets[2]) << ','
        << format_double(eval.shape.offsets[3]) << ','
        << format_double(eval.quality_mean) << ','
        << format_double(eval.quality_sem) << ','
        << format_double(eval.reliability_mean) << ','
        << format_double(eval.reliability_sem) << ','
        << (eval.feasible ? 1 : 0) << '\n';
  }
  if (!out.flush())
    throw std::runtime_error("write failed: " + path.string());
}

}  // namespace safebandit
