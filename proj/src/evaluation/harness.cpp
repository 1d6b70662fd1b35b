#include "safebandit/evaluation/harness.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <stdexcept>

#include "safebandit/evaluation/parallel.hpp"
#include "safebandit/evaluation/runner.hpp"
#include "safebandit/policies/clucb2_asc.hpp"
#include "safebandit/policies/ts_asc.hpp"

namespace safebandit {

std::unique_ptr<Policy> make_policy(const std::string& name, int dim,
                                    const ModelParams& model,
                                    double policy_alpha) {
  if (name == "ts_asc")
    return std::make_unique<TsAscLinear>(
        dim, model.lambda, model.sigma,
        TsAscLinear::Options{policy_alpha, true});
  if (name == "vanilla_ts")
    return make_vanilla_ts(dim, model.lambda, model.sigma);
  if (name == "clucb2_asc_c" || name == "clucb2_asc_i") {
    Clucb2Asc::Options options;
    options.alpha = policy_alpha;
    options.mode = name == "clucb2_asc_c" ? Clucb2Asc::Mode::cumulative
                                          : Clucb2Asc::Mode::instance;
    options.baseline_value_lower_bound = model.baseline_value_lower_bound;
    options.delta = model.delta;
    options.param_bound = model.param_bound;
    options.feature_bound = model.feature_bound;
    return std::make_unique<Clucb2Asc>(dim, model.lambda, model.sigma,
                                       options);
  }
  if (name == "baseline") return std::make_unique<BaselinePolicy>();
  throw std::invalid_argument("make_policy: unknown policy '" + name + "'");
}

std::filesystem::path trace_filename(const std::filesystem::path& dir,
                                     const CellSpec& cell, int realization) {
  return dir / (cell.policy + "_alpha" + format_double(cell.spec_alpha)) /
         ("realization_" + std::to_string(realization) + ".jsonl");
}

std::vector<CellSeries> run_synthetic_suite(
    const SuiteOptions& options, const std::vector<CellSpec>& cells) {
  if (cells.empty())
    throw std::invalid_argument("run_synthetic_suite: no cells");
  if (options.save_traces > 0 && options.trace_dir.empty())
    throw std::invalid_argument(
        "run_synthetic_suite: save_traces needs a trace_dir");

  std::vector<CellSeries> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    results[c].policy = cells[c].policy;
    results[c].alpha = cells[c].spec_alpha;
  }

  const auto run_realization = [&](int i) {
    std::vector<TraceSummary> summaries(cells.size());
    std::map<double, LinearConstraintProblem> problems;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const CellSpec& cell = cells[c];
      auto found = problems.find(cell.spec_alpha);
      if (found == problems.end()) {
        SyntheticSpec spec;
        spec.seed = mix_seed(options.master_seed, i, 0);
        spec.num_arms = options.num_arms;
        spec.dim = options.dim;
        spec.noise_std = options.problem_noise_std;
        spec.alpha = cell.spec_alpha;
        found = problems.emplace(cell.spec_alpha, generate_synthetic(spec))
                    .first;
      }
      const LinearConstraintProblem& problem = found->second;

      ModelParams model = options.model;
      if (cell.baseline_value_lower_bound)
        model.baseline_value_lower_bound = *cell.baseline_value_lower_bound;
      std::unique_ptr<Policy> policy =
          make_policy(cell.policy, options.dim, model, cell.policy_alpha);
      Rng rng(mix_seed(options.master_seed, i, 1));
      const bool keep = i < options.save_traces;
      EpisodeTrace trace =
          run_episode(problem, *policy, options.horizon, rng, keep);
      trace.policy = cell.policy;
      trace.policy_alpha = cell.policy_alpha;
      trace.realization = i;
      if (keep)
        write_trace_jsonl(trace_filename(options.trace_dir, cell, i), trace,
                          options.config_fingerprint);
      summaries[c] =
          TraceSummary::from_trace(trace, options.normalized_window);
    }
    return summaries;
  };

  const std::function<void(int, std::vector<TraceSummary>&&)> merge =
      [&](int, std::vector<TraceSummary>&& summaries) {
        for (std::size_t c = 0; c < cells.size(); ++c)
          results[c].series.add(summaries[c]);
      };

  parallel_for_ordered<std::vector<TraceSummary>>(
      options.realizations, options.workers, run_realization, merge);
  return results;
}

std::vector<CellSeries> run_transcode_suite(
    const SuiteOptions& options, std::uint64_t family_seed, int context_dim,
    const std::vector<CellSpec>& cells) {
  if (cells.empty())
    throw std::invalid_argument("run_transcode_suite: no cells");
  for (const CellSpec& cell : cells)
    if (cell.policy == "clucb2_asc_c" || cell.policy == "clucb2_asc_i")
      throw std::invalid_argument(
          "run_transcode_suite: CLUCB2 policies are not defined for the "
          "Bernoulli constraint model");

  const TranscodeProblem problem =
      TranscodeProblem::generate(family_seed, context_dim);

  std::vector<CellSeries> results(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    results[c].policy = cells[c].policy;
    results[c].alpha = cells[c].spec_alpha;
  }

  const auto run_realization = [&](int i) {
    std::vector<TraceSummary> summaries(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const CellSpec& cell = cells[c];
      RewardShape shape;
      shape.alpha = cell.spec_alpha;

      std::unique_ptr<Policy> policy;
      if (cell.policy == "ts_asc")
        policy = std::make_unique<TsAscBernoulli>(
            problem.feature_dim(), options.model.lambda, shape,
            TsAscBernoulli::Options{cell.policy_alpha, true});
      else if (cell.policy == "vanilla_ts")
        policy = std::make_unique<TsAscBernoulli>(
            problem.feature_dim(), options.model.lambda, shape,
            TsAscBernoulli::Options{0.0, false});
      else if (cell.policy == "baseline")
        policy = std::make_unique<BaselinePolicy>();
      else
        throw std::invalid_argument("run_transcode_suite: unknown policy '" +
                                    cell.policy + "'");

      Rng rng(mix_seed(options.master_seed, i, 1));
      const bool keep = i < options.save_traces;
      EpisodeTrace trace = run_transcode_episode(
          problem, *policy, shape, options.horizon, rng, keep);
      trace.policy = cell.policy;
      trace.policy_alpha = cell.policy_alpha;
      trace.realization = i;
      if (keep)
        write_trace_jsonl(trace_filename(options.trace_dir, cell, i), trace,
                          options.config_fingerprint);
      summaries[c] =
          TraceSummary::from_trace(trace, options.normalized_window);
    }
    return summaries;
  };

  const std::function<void(int, std::vector<TraceSummary>&&)> merge =
      [&](int, std::vector<TraceSummary>&& summaries) {
        for (std::size_t c = 0; c < cells.size(); ++c)
          results[c].series.add(summaries[c]);
      };

  parallel_for_ordered<std::vector<TraceSummary>>(
      options.realizations, options.workers, run_realization, merge);
  return results;
}

CellSummary summarize_cell(const AggregateSeries& series, int window) {
  CellSummary summary;
  const int horizon = series.horizon();
  if (horizon <= 0) return summary;
  const int tail = std::max(1, horizon / 10);
  double regret = 0.0, regret_unconstrained = 0.0;
  for (int i = horizon - tail; i < horizon; ++i) {
    regret += series.at(0, i).mean;
    regret_unconstrained += series.at(1, i).mean;
  }
  summary.final_regret = regret / tail;
  summary.final_regret_unconstrained = regret_unconstrained / tail;

  const int w = std::min(window, horizon);
  double violation = 0.0;
  for (int i = horizon - w; i < horizon; ++i) violation += series.at(2, i).mean;
  summary.final_violation_rate = violation / w;
  summary.normalized_last_k = series.normalized_last_k();
  return summary;
}

void write_trace_jsonl(const std::filesystem::path& path,
                       const EpisodeTrace& trace,
                       const std::string& config_fingerprint) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open for writing: " + path.string());

  nlohmann::json header;
  header["type"] = "header";
  header["policy"] = trace.policy;
  header["policy_alpha"] = trace.policy_alpha;
  header["spec_alpha"] = trace.spec_alpha;
  header["realization"] = trace.realization;
  header["T"] = trace.horizon();
  header["problem_seed"] = trace.problem_seed;
  header["config"] = config_fingerprint;
  out << header.dump() << '\n';

  for (const StepRecord& step : trace.steps) {
    nlohmann::json line;
    line["t"] = step.t;
    line["action"] = step.action;
    line["baseline"] = step.baseline_action;
    line["feasible"] = step.feasible;
    line["r"] = step.reward;
    line["c"] = step.constraint;
    line["exp_r"] = step.exp_reward;
    line["exp_c"] = step.exp_constraint;
    line["exp_cb"] = step.exp_constraint_baseline;
    line["violation"] = step.violation ? 1 : 0;
    line["regret"] = step.regret;
    line["regret_unc"] = step.regret_unconstrained;
    line["src"] = step.source_quality;
    out << line.dump() << '\n';
  }
  if (!out.flush())
    throw std::runtime_error("write failed: " + path.string());
}

EpisodeTrace read_trace_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open trace: " + path.string());

  EpisodeTrace trace;
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("empty trace file: " + path.string());
  const nlohmann::json header = nlohmann::json::parse(line);
  if (header.value("type", "") != "header")
    throw std::runtime_error("trace file missing header: " + path.string());
  trace.policy = header.at("policy").get<std::string>();
  trace.policy_alpha = header.at("policy_alpha").get<double>();
  trace.spec_alpha = header.at("spec_alpha").get<double>();
  trace.realization = header.at("realization").get<int>();
  trace.problem_seed = header.at("problem_seed").get<std::uint64_t>();
  const int horizon = header.at("T").get<int>();
  trace.steps.reserve(horizon);

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json doc = nlohmann::json::parse(line);
    StepRecord step;
    step.t = doc.at("t").get<int>();
    step.action = doc.at("action").get<int>();
    step.baseline_action = doc.at("baseline").get<int>();
    step.feasible = doc.at("feasible").get<std::vector<int>>();
    step.reward = doc.at("r").get<double>();
    step.constraint = doc.at("c").get<double>();
    step.exp_reward = doc.at("exp_r").get<double>();
    step.exp_constraint = doc.at("exp_c").get<double>();
    step.exp_constraint_baseline = doc.at("exp_cb").get<double>();
    step.violation = doc.at("violation").get<int>() != 0;
    step.regret = doc.at("regret").get<double>();
    step.regret_unconstrained = doc.at("regret_unc").get<double>();
    step.source_quality = doc.at("src").get<int>();
    trace.steps.push_back(std::move(step));
  }
  if (trace.horizon() != horizon)
    throw std::runtime_error("trace step count disagrees with header: " +
                             path.string());
  return trace;
}

}  // namespace safebandit
