#include "safebandit/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace safebandit {

namespace {

using nlohmann::json;

void check_keys(const json& object, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + path + key + "'");
}

template <typename T>
void read(const json& object, const char* key, T& target) {
  if (object.contains(key)) {
    try {
      target = object.at(key).get<T>();
    } catch (const json::exception& err) {
      throw ConfigError(std::string("field '") + key + "': " + err.what());
    }
  }
}

}  // namespace

void ExperimentConfig::resolve() {
  if (environment != "synthetic" && environment != "transcode")
    throw ConfigError("environment must be 'synthetic' or 'transcode'");
  if (preset != "desk" && preset != "paper")
    throw ConfigError("preset must be 'desk' or 'paper'");
  if (horizon == 0) horizon = preset == "paper" ? 10000 : 2000;
  if (realizations == 0) realizations = preset == "paper" ? 1000 : 200;
  if (horizon < 1) throw ConfigError("T must be >= 1");
  if (realizations < 1) throw ConfigError("realizations must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (save_traces < 0) throw ConfigError("save_traces must be >= 0");
  if (moving_average_window < 1 || moving_average_window > horizon)
    throw ConfigError("moving_average_window must be in [1, T]");
  if (num_arms < 31) throw ConfigError("problem.K must be >= 31");
  if (dim < 1) throw ConfigError("problem.d must be >= 1");
  if (!(problem_noise_std >= 0.0))
    throw ConfigError("problem.sigma must be >= 0");
  if (alphas.empty()) throw ConfigError("alphas must not be empty");
  for (double alpha : alphas)
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ConfigError("alphas entries must lie in [0, 1)");
  if (policies.empty()) throw ConfigError("policies must not be empty");
  for (const PolicyConfig& policy : policies)
    if (std::find(kPolicyNames.begin(), kPolicyNames.end(), policy.name) ==
        kPolicyNames.end())
      throw ConfigError("unknown policy '" + policy.name + "'");
  if (!(model.lambda > 0.0)) throw ConfigError("model.lambda must be > 0");
  if (!(model.sigma > 0.0)) throw ConfigError("model.sigma must be > 0");
  if (!(model.delta > 0.0 && model.delta < 1.0))
    throw ConfigError("model.delta must be in (0, 1)");
  if (tune.replications < 2)
    throw ConfigError("tune.replications must be >= 2");
  if (tune.budget < 1) throw ConfigError("tune.budget must be >= 1");
  if (tune.eval_window < 1 || tune.eval_window > tune.horizon)
    throw ConfigError("tune.eval_window must be in [1, tune.T]");
}

std::string ExperimentConfig::to_json(bool stable_only) const {
  json doc;
  doc["environment"] = environment;
  doc["preset"] = preset;
  doc["T"] = horizon;
  doc["realizations"] = realizations;
  doc["seed"] = seed;
  doc["alphas"] = alphas;
  json policy_list = json::array();
  for (const PolicyConfig& policy : policies) {
    json entry;
    entry["name"] = policy.name;
    if (policy.alpha) entry["alpha"] = *policy.alpha;
    if (policy.baseline_value_lower_bound)
      entry["r_l"] = *policy.baseline_value_lower_bound;
    policy_list.push_back(entry);
  }
  doc["policies"] = policy_list;
  doc["model"] = {{"lambda", model.lambda},
                  {"sigma", model.sigma},
                  {"delta", model.delta},
                  {"S", model.param_bound},
                  {"L", model.feature_bound},
                  {"r_l", model.baseline_value_lower_bound}};
  doc["problem"] = {{"K", num_arms},
                    {"d", dim},
                    {"sigma", problem_noise_std}};
  doc["moving_average_window"] = moving_average_window;
  doc["tune"] = {{"family_seed", tune.family_seed},
                 {"context_dim", tune.context_dim},
                 {"T", tune.horizon},
                 {"eval_window", tune.eval_window},
                 {"replications", tune.replications},
                 {"budget", tune.budget},
                 {"random", tune.random},
                 {"grid",
                  {{"alphas", tune.space.alphas},
                   {"offsets_480p", tune.space.offsets_480p},
                   {"offsets_720p", tune.space.offsets_720p},
                   {"offsets_1080p", tune.space.offsets_1080p}}}};
  if (!stable_only) {
    doc["output_dir"] = output_dir;
    doc["workers"] = workers;
    doc["save_traces"] = save_traces;
  }
  return doc.dump(2);
}

std::string ExperimentConfig::config_fingerprint() const {
  return fingerprint(to_json(true));
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config parse error: ") + err.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");
  check_keys(doc, "",
             {"environment", "preset", "T", "realizations", "seed", "alphas",
              "policies", "model", "problem", "moving_average_window",
              "output_dir", "workers", "save_traces", "tune"});

  ExperimentConfig config;
  read(doc, "environment", config.environment);
  read(doc, "preset", config.preset);
  read(doc, "T", config.horizon);
  read(doc, "realizations", config.realizations);
  read(doc, "seed", config.seed);
  read(doc, "alphas", config.alphas);
  read(doc, "moving_average_window", config.moving_average_window);
  read(doc, "output_dir", config.output_dir);
  read(doc, "workers", config.workers);
  read(doc, "save_traces", config.save_traces);

  if (doc.contains("policies")) {
    if (!doc["policies"].is_array())
      throw ConfigError("policies must be an array");
    config.policies.clear();
    int index = 0;
    for (const json& entry : doc["policies"]) {
      if (!entry.is_object())
        throw ConfigError("policies[" + std::to_string(index) +
                          "] must be an object");
      check_keys(entry, "policies[" + std::to_string(index) + "].",
                 {"name", "alpha", "r_l"});
      PolicyConfig policy;
      read(entry, "name", policy.name);
      if (entry.contains("alpha"))
        policy.alpha = entry.at("alpha").get<double>();
      if (entry.contains("r_l"))
        policy.baseline_value_lower_bound = entry.at("r_l").get<double>();
      config.policies.push_back(policy);
      ++index;
    }
  }
  if (doc.contains("model")) {
    const json& model = doc["model"];
    check_keys(model, "model.", {"lambda", "sigma", "delta", "S", "L", "r_l"});
    read(model, "lambda", config.model.lambda);
    read(model, "sigma", config.model.sigma);
    read(model, "delta", config.model.delta);
    read(model, "S", config.model.param_bound);
    read(model, "L", config.model.feature_bound);
    read(model, "r_l", config.model.baseline_value_lower_bound);
  }
  if (doc.contains("problem")) {
    const json& problem = doc["problem"];
    check_keys(problem, "problem.", {"K", "d", "sigma"});
    read(problem, "K", config.num_arms);
    read(problem, "d", config.dim);
    read(problem, "sigma", config.problem_noise_std);
  }
  if (doc.contains("tune")) {
    const json& tune = doc["tune"];
    check_keys(tune, "tune.",
               {"family_seed", "context_dim", "T", "eval_window",
                "replications", "budget", "random", "grid"});
    read(tune, "family_seed", config.tune.family_seed);
    read(tune, "context_dim", config.tune.context_dim);
    read(tune, "T", config.tune.horizon);
    read(tune, "eval_window", config.tune.eval_window);
    read(tune, "replications", config.tune.replications);
    read(tune, "budget", config.tune.budget);
    read(tune, "random", config.tune.random);
    if (tune.contains("grid")) {
      const json& grid = tune["grid"];
      check_keys(grid, "tune.grid.",
                 {"alphas", "offsets_480p", "offsets_720p", "offsets_1080p"});
      read(grid, "alphas", config.tune.space.alphas);
      read(grid, "offsets_480p", config.tune.space.offsets_480p);
      read(grid, "offsets_720p", config.tune.space.offsets_720p);
      read(grid, "offsets_1080p", config.tune.space.offsets_1080p);
    }
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace safebandit
