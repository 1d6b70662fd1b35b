#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>

#include "safebandit/config.hpp"
#include "safebandit/errors.hpp"
#include "safebandit/evaluation/harness.hpp"
#include "safebandit/problems/linear_problem.hpp"
#include "safebandit/tuning/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void apply_seed_env(safebandit::ExperimentConfig& config) {
  if (const char* env = std::getenv("SAFEBANDIT_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw safebandit::ConfigError(
          "SAFEBANDIT_SEED is not an unsigned integer");
    }
  }
}

std::vector<safebandit::CellSpec> build_cells(
    const safebandit::ExperimentConfig& config) {
  std::vector<safebandit::CellSpec> cells;
  for (const safebandit::PolicyConfig& policy : config.policies)
    for (double alpha : config.alphas) {
      safebandit::CellSpec cell;
      cell.policy = policy.name;
      cell.spec_alpha = alpha;
      cell.policy_alpha = policy.alpha.value_or(alpha);
      cell.baseline_value_lower_bound = policy.baseline_value_lower_bound;
      cells.push_back(cell);
    }
  return cells;
}

json cell_summary_json(const safebandit::CellSeries& cell,
                       const safebandit::CellSpec& spec, int window) {
  const safebandit::CellSummary summary =
      safebandit::summarize_cell(cell.series, window);
  json doc;
  doc["policy"] = cell.policy;
  doc["alpha"] = cell.alpha;
  doc["policy_alpha"] = spec.policy_alpha;
  doc["realizations"] = cell.series.realizations();
  doc["final_regret"] = summary.final_regret;
  doc["final_regret_unconstrained"] = summary.final_regret_unconstrained;
  doc["final_violation_rate"] = summary.final_violation_rate;
  doc["normalized_constraint_last_100"] = {
      {"mean", summary.normalized_last_k.mean},
      {"sem", summary.normalized_last_k.sem}};
  return doc;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

int cmd_run(const safebandit::ExperimentConfig& config) {
  const std::string fp = config.config_fingerprint();
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  safebandit::SuiteOptions options;
  options.horizon = config.horizon;
  options.realizations = config.realizations;
  options.master_seed = config.seed;
  options.num_arms = config.num_arms;
  options.dim = config.dim;
  options.problem_noise_std = config.problem_noise_std;
  options.model = config.model;
  options.workers = config.workers;
  options.save_traces = config.save_traces;
  options.trace_dir = out_dir / "traces";
  options.config_fingerprint = fp;

  const std::vector<safebandit::CellSpec> cells = build_cells(config);
  std::vector<safebandit::CellSeries> results;
  if (config.environment == "synthetic")
    results = safebandit::run_synthetic_suite(options, cells);
  else
    results = safebandit::run_transcode_suite(
        options, config.tune.family_seed, config.tune.context_dim, cells);

  safebandit::export_series_csv(results, out_dir / "series.csv", fp);
  safebandit::export_table_csv(results, out_dir / "normalized_table.csv", fp);

  json summary;
  summary["fingerprint"] = fp;
  summary["config"] = json::parse(config.to_json(true));
  summary["cells"] = json::array();
  for (std::size_t c = 0; c < results.size(); ++c)
    summary["cells"].push_back(cell_summary_json(
        results[c], cells[c], config.moving_average_window));
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "wrote " << (out_dir / "series.csv").string() << "\n";
  std::cout << "wrote " << (out_dir / "normalized_table.csv").string() << "\n";
  std::cout << "wrote " << (out_dir / "summary.json").string() << "\n";
  for (std::size_t c = 0; c < results.size(); ++c) {
    const safebandit::CellSummary s = safebandit::summarize_cell(
        results[c].series, config.moving_average_window);
    std::cout << results[c].policy << " alpha="
              << safebandit::format_double(results[c].alpha)
              << " final_regret=" << s.final_regret
              << " final_violation_rate=" << s.final_violation_rate
              << " normalized=" << s.normalized_last_k.mean << "\n";
  }
  return 0;
}

int cmd_gen(std::uint64_t seed, double alpha, int num_arms, int dim,
            double sigma, const std::string& out_path) {
  safebandit::SyntheticSpec spec;
  spec.seed = seed;
  spec.alpha = alpha;
  spec.num_arms = num_arms;
  spec.dim = dim;
  spec.noise_std = sigma;
  if (spec.num_arms < 31)
    throw safebandit::ConfigError("K must be >= 31 (top-30 baseline)");

  safebandit::GenerationStats stats;
  const safebandit::LinearConstraintProblem problem =
      safebandit::generate_synthetic(spec, &stats);
  const auto report = problem.check_invariants();

  std::cout << "seed=" << seed << " K=" << num_arms << " d=" << dim
            << " sigma=" << safebandit::format_double(sigma)
            << " alpha=" << safebandit::format_double(alpha) << "\n";
  std::cout << "positivity (reward): "
            << (report.reward_means_positive ? "PASS" : "FAIL") << "\n";
  std::cout << "positivity (constraint): "
            << (report.constraint_means_positive ? "PASS" : "FAIL") << "\n";
  std::cout << "trade-off: " << (report.tradeoff_holds ? "PASS" : "FAIL")
            << "\n";
  std::cout << "baseline-in-top30: "
            << (report.baseline_in_top30 ? "PASS" : "FAIL") << "\n";
  std::cout << "baseline arm: " << problem.baseline_arm << "\n";
  std::cout << "rejections: reward=" << stats.positivity_reward_rejections
            << " constraint=" << stats.positivity_constraint_rejections
            << " tradeoff=" << stats.tradeoff_rejections
            << " draws=" << stats.draws << "\n";

  write_text(out_path, problem.to_json() + "\n");
  std::cout << "wrote " << out_path << "\n";
  return report.all() ? 0 : kExitRuntime;
}

int cmd_tune(const safebandit::ExperimentConfig& config, int budget_override) {
  const std::string fp = config.config_fingerprint();
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  const safebandit::TranscodeProblem problem =
      safebandit::TranscodeProblem::generate(config.tune.family_seed,
                                             config.tune.context_dim);
  safebandit::EvalOptions options;
  options.horizon = config.tune.horizon;
  options.eval_window = config.tune.eval_window;
  options.replications = config.tune.replications;
  options.master_seed = config.seed;
  options.lambda = config.model.lambda;
  options.workers = config.workers;

  safebandit::SearchSpace space = config.tune.space;
  space.random = config.tune.random;
  space.random_seed = config.seed;
  const int budget =
      budget_override > 0 ? budget_override : config.tune.budget;

  const safebandit::SearchResult result =
      safebandit::constrained_search(problem, space, budget, options);

  safebandit::export_frontier_csv(result, out_dir / "frontier.csv", fp);

  json best;
  best["fingerprint"] = fp;
  best["baseline"] = {{"reliability_mean", result.baseline.reliability_mean},
                      {"reliability_sem", result.baseline.reliability_sem},
                      {"quality_mean", result.baseline.quality_mean},
                      {"quality_sem", result.baseline.quality_sem}};
  best["all_infeasible"] = result.all_infeasible;
  const auto shape_json = [](const safebandit::ConfigEvaluation& eval) {
    return json{{"alpha", eval.shape.alpha},
                {"omega_480p", eval.shape.offsets[1]},
                {"omega_720p", eval.shape.offsets[2]},
                {"omega_1080p", eval.shape.offsets[3]},
                {"quality_mean", eval.quality_mean},
                {"quality_sem", eval.quality_sem},
                {"reliability_mean", eval.reliability_mean},
                {"reliability_sem", eval.reliability_sem},
                {"feasible", eval.feasible}};
  };
  if (result.all_infeasible) {
    best["least_violating"] =
        shape_json(result.frontier[result.least_violating_index]);
  } else {
    best["best"] = shape_json(result.frontier[result.best_index]);
  }
  write_text(out_dir / "best_config.json", best.dump(2) + "\n");

  std::cout << "evaluated " << result.frontier.size() << " configurations\n";
  if (result.all_infeasible)
    std::cout << "all-infeasible: no configuration met the reliability "
                 "constraint\n";
  else
    std::cout << "best quality_preserved_1080p="
              << result.frontier[result.best_index].quality_mean << "\n";
  std::cout << "wrote " << (out_dir / "frontier.csv").string() << "\n";
  std::cout << "wrote " << (out_dir / "best_config.json").string() << "\n";
  return 0;
}

int cmd_replay(const std::string& traces_dir, const std::string& out_dir_str,
               int window) {
  const fs::path traces_path(traces_dir);
  if (!fs::exists(traces_path))
    throw safebandit::ConfigError("traces directory does not exist: " +
                                  traces_dir);

  std::vector<safebandit::EpisodeTrace> traces;
  for (const auto& entry : fs::recursive_directory_iterator(traces_path))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      traces.push_back(safebandit::read_trace_jsonl(entry.path()));
  if (traces.empty())
    throw safebandit::ConfigError("no .jsonl traces under " + traces_dir);

  // Re-derive the violation flags and fail loudly on tampered traces.
  for (const safebandit::EpisodeTrace& trace : traces)
    for (const safebandit::StepRecord& step : trace.steps) {
      const bool expected =
          step.exp_constraint <
          (1.0 - trace.spec_alpha) * step.exp_constraint_baseline;
      if (expected != step.violation)
        throw std::runtime_error(
            "trace inconsistency: stored violation flag does not match the "
            "stored expectations");
    }

  std::map<std::pair<std::string, double>,
           std::vector<const safebandit::EpisodeTrace*>>
      groups;
  for (const safebandit::EpisodeTrace& trace : traces)
    groups[{trace.policy, trace.spec_alpha}].push_back(&trace);

  std::vector<safebandit::CellSeries> results;
  std::vector<safebandit::CellSpec> specs;
  for (auto& [key, group] : groups) {
    std::sort(group.begin(), group.end(),
              [](const auto* a, const auto* b) {
                return a->realization < b->realization;
              });
    safebandit::CellSeries cell;
    cell.policy = key.first;
    cell.alpha = key.second;
    for (const safebandit::EpisodeTrace* trace : group)
      cell.series.add(safebandit::TraceSummary::from_trace(*trace));
    results.push_back(std::move(cell));
    safebandit::CellSpec spec;
    spec.policy = key.first;
    spec.spec_alpha = key.second;
    spec.policy_alpha = group.front()->policy_alpha;
    specs.push_back(spec);
  }

  const fs::path out_dir(out_dir_str);
  fs::create_directories(out_dir);
  // All traces of one run share the fingerprint recorded at write time; a
  // mixture is reported as-is, joined by '+'.
  std::string fp;
  std::vector<std::string> fingerprints;
  for (const auto& entry : fs::recursive_directory_iterator(traces_path))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      std::ifstream in(entry.path(), std::ios::binary);
      std::string line;
      std::getline(in, line);
      const std::string value =
          json::parse(line).value("config", std::string());
      if (std::find(fingerprints.begin(), fingerprints.end(), value) ==
          fingerprints.end())
        fingerprints.push_back(value);
    }
  std::sort(fingerprints.begin(), fingerprints.end());
  for (std::size_t i = 0; i < fingerprints.size(); ++i)
    fp += (i ? "+" : "") + fingerprints[i];

  safebandit::export_series_csv(results, out_dir / "series.csv", fp);
  safebandit::export_table_csv(results, out_dir / "normalized_table.csv", fp);

  json summary;
  summary["fingerprint"] = fp;
  summary["replayed_from"] = traces_dir;
  summary["cells"] = json::array();
  for (std::size_t c = 0; c < results.size(); ++c)
    summary["cells"].push_back(
        cell_summary_json(results[c], specs[c], window));
  write_text(out_dir / "summary.json", summary.dump(2) + "\n");

  std::cout << "replayed " << traces.size() << " traces into "
            << results.size() << " cells\n";
  std::cout << "wrote " << (out_dir / "series.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained contextual bandit experiments"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand(
      "run", "Run a policy/alpha experiment suite and export aggregates");
  std::string run_config_path, run_out, run_preset;
  int run_horizon = 0, run_realizations = 0, run_workers = 0,
      run_save_traces = -1;
  std::uint64_t run_seed = 0;
  run->add_option("--config", run_config_path, "Config JSON file");
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--preset", run_preset, "desk or paper");
  run->add_option("--T", run_horizon, "Horizon override");
  run->add_option("--realizations", run_realizations,
                  "Realization count override");
  run->add_option("--seed", run_seed, "Master seed override");
  run->add_option("--workers", run_workers, "Parallel realization workers");
  run->add_option("--save-traces", run_save_traces,
                  "Persist the first N realizations per cell as JSONL");

  // gen
  auto* gen = app.add_subcommand(
      "gen", "Generate a synthetic problem and write it as JSON");
  std::uint64_t gen_seed = 1;
  double gen_alpha = 0.01, gen_sigma = 0.1;
  int gen_arms = 100, gen_dim = 4;
  std::string gen_out = "problem.json";
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--alpha", gen_alpha, "Constraint parameter alpha");
  gen->add_option("--K", gen_arms, "Number of arms (>= 31)");
  gen->add_option("--d", gen_dim, "Feature dimension");
  gen->add_option("--sigma", gen_sigma, "Outcome noise std");
  gen->add_option("--out", gen_out, "Output file");

  // tune
  auto* tune = app.add_subcommand(
      "tune", "Search reward shapes on the transcode simulator");
  std::string tune_config_path, tune_out;
  int tune_budget = 0, tune_workers = 0;
  std::uint64_t tune_seed = 0;
  tune->add_option("--config", tune_config_path, "Config JSON file");
  tune->add_option("--out", tune_out, "Output directory");
  tune->add_option("--budget", tune_budget, "Configuration budget");
  tune->add_option("--seed", tune_seed, "Master seed override");
  tune->add_option("--workers", tune_workers, "Parallel replication workers");

  // replay
  auto* replay = app.add_subcommand(
      "replay", "Re-derive aggregate metrics from stored traces");
  std::string replay_traces, replay_out;
  int replay_window = 100;
  replay->add_option("--traces", replay_traces, "Directory of JSONL traces")
      ->required();
  replay->add_option("--out", replay_out, "Output directory")->required();
  replay->add_option("--window", replay_window, "Moving-average window");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run || *tune) {
      const std::string& path = *run ? run_config_path : tune_config_path;
      safebandit::ExperimentConfig config =
          path.empty() ? safebandit::ExperimentConfig{}
                       : safebandit::ExperimentConfig::from_file(path);
      if (*run) {
        if (!run_out.empty()) config.output_dir = run_out;
        if (!run_preset.empty()) config.preset = run_preset;
        if (run->count("--T")) config.horizon = run_horizon;
        if (run->count("--realizations"))
          config.realizations = run_realizations;
        if (run->count("--seed")) config.seed = run_seed;
        if (run->count("--workers")) config.workers = run_workers;
        if (run->count("--save-traces")) config.save_traces = run_save_traces;
      } else {
        if (!tune_out.empty()) config.output_dir = tune_out;
        if (tune->count("--seed")) config.seed = tune_seed;
        if (tune->count("--workers")) config.workers = tune_workers;
      }
      apply_seed_env(config);
      config.resolve();
      return *run ? cmd_run(config) : cmd_tune(config, tune_budget);
    }
    if (*gen)
      return cmd_gen(gen_seed, gen_alpha, gen_arms, gen_dim, gen_sigma,
                     gen_out);
    if (*replay) return cmd_replay(replay_traces, replay_out, replay_window);
  } catch (const safebandit::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
