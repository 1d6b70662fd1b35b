#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "safebandit/evaluation/harness.hpp"
#include "safebandit/tuning/tuning.hpp"

namespace safebandit {

/// Configuration problem (bad value, unknown key, malformed file). The CLI
/// maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolicyConfig {
  std::string name = "ts_asc";
  std::optional<double> alpha;  // policy-internal; defaults to the cell alpha
  std::optional<double> baseline_value_lower_bound;  // r_l override
};

struct TuneConfig {
  std::uint64_t family_seed = 7;
  int context_dim = 8;
  int horizon = 2500;
  int eval_window = 1000;
  int replications = 5;
  int budget = 108;
  bool random = false;
  SearchSpace space;
};

/// Resolved experiment description. Defaults cover every field; a JSON file
/// overrides defaults, command-line flags override the file, and the
/// SAFEBANDIT_SEED environment variable overrides the master seed last.
struct ExperimentConfig {
  std::string environment = "synthetic";
  std::string preset = "desk";  // desk: T=2000, R=200; paper: T=10000, R=1000
  int horizon = 0;              // 0 = take from preset
  int realizations = 0;         // 0 = take from preset
  std::uint64_t seed = 20240501;
  std::vector<double> alphas = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<PolicyConfig> policies = {
      {"ts_asc", {}, {}},
      {"clucb2_asc_c", {}, {}},
      {"clucb2_asc_i", {}, {}},
      {"baseline", {}, {}}};
  ModelParams model;
  int num_arms = 100;
  int dim = 4;
  double problem_noise_std = 0.1;
  int moving_average_window = 100;
  std::string output_dir = "runs/out";
  int workers = 1;
  int save_traces = 0;
  TuneConfig tune;

  /// Fills preset-dependent fields and validates ranges.
  void resolve();

  /// Canonical JSON. The stable form feeds the fingerprint and excludes
  /// fields that cannot change results (output_dir, workers, save_traces).
  std::string to_json(bool stable_only) const;
  std::string config_fingerprint() const;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

}  // namespace safebandit
