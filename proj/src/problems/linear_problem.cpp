#include "safebandit/problems/linear_problem.hpp"

#include <algorithm>
#include <json.hpp>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "safebandit/errors.hpp"

namespace safebandit {

std::vector<int> LinearConstraintProblem::feasible_set(double alpha) const {
  const double threshold = (1.0 - alpha) * constraint_mean(baseline_arm);
  std::vector<int> feasible;
  for (int a = 0; a < num_arms(); ++a)
    if (constraint_mean(a) >= threshold) feasible.push_back(a);
  return feasible;
}

double LinearConstraintProblem::optimal_feasible_reward(double alpha) const {
  double best = -std::numeric_limits<double>::infinity();
  for (int a : feasible_set(alpha)) best = std::max(best, reward_mean(a));
  return best;
}

double LinearConstraintProblem::optimal_reward() const {
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < num_arms(); ++a) best = std::max(best, reward_mean(a));
  return best;
}

void LinearConstraintProblem::sample_outcomes(int arm, Rng& rng,
                                              double& reward,
                                              double& constraint) const {
  if (arm < 0 || arm >= num_arms())
    throw std::invalid_argument(
        "LinearConstraintProblem::sample_outcomes: arm out of range");
  reward = reward_mean(arm) + noise_std * rng.normal();
  constraint = constraint_mean(arm) + noise_std * rng.normal();
}

namespace {

// Sorted positions by value descending, index ascending on ties.
std::vector<int> order_desc(const Eigen::VectorXd& values,
                            const std::vector<int>& candidates) {
  std::vector<int> order = candidates;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (values(a) != values(b)) return values(a) > values(b);
    return a < b;
  });
  return order;
}

}  // namespace

int select_baseline(const Eigen::MatrixXd& arm_features,
                    const Eigen::VectorXd& theta_reward,
                    const Eigen::VectorXd& theta_constraint) {
  const int num_arms = static_cast<int>(arm_features.rows());
  if (num_arms < 31)
    throw std::invalid_argument(
        "select_baseline: needs at least 31 arms for the top-30 construction");

  const Eigen::VectorXd reward_means = arm_features * theta_reward;
  const Eigen::VectorXd constraint_means = arm_features * theta_constraint;

  std::vector<int> all(num_arms);
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> by_reward = order_desc(reward_means, all);
  std::vector<int> top30(by_reward.begin(), by_reward.begin() + 30);

  std::vector<int> by_constraint = order_desc(constraint_means, top30);
  // The arm holding the 20th-highest constraint value; among ties at that
  // value the lowest arm index wins.
  const double target = constraint_means(by_constraint[19]);
  int chosen = by_constraint[19];
  for (int a : top30)
    if (constraint_means(a) == target && a < chosen) chosen = a;
  return chosen;
}

LinearConstraintProblem generate_synthetic(const SyntheticSpec& spec,
                                           GenerationStats* stats) {
  if (spec.num_arms < 31)
    throw std::invalid_argument(
        "generate_synthetic: num_arms must be >= 31 (top-30 baseline)");
  if (spec.dim < 1)
    throw std::invalid_argument("generate_synthetic: dim must be >= 1");
  if (!(spec.alpha >= 0.0 && spec.alpha < 1.0))
    throw std::invalid_argument("generate_synthetic: alpha must be in [0, 1)");

  Rng rng(spec.seed);
  GenerationStats local;
  GenerationStats& st = stats ? *stats : local;
  st = GenerationStats{};

  const auto draw_vector = [&](Eigen::VectorXd& v) {
    v.resize(spec.dim);
    for (int i = 0; i < spec.dim; ++i) v(i) = rng.normal();
    ++st.draws;
  };

  while (st.draws < spec.rejection_budget) {
    Eigen::VectorXd theta_reward, theta_constraint;
    draw_vector(theta_reward);
    draw_vector(theta_constraint);

    Eigen::MatrixXd features(spec.num_arms, spec.dim);
    bool arms_ok = true;
    for (int a = 0; a < spec.num_arms && arms_ok; ++a) {
      bool accepted = false;
      for (int attempt = 0;
           attempt < spec.per_arm_budget && st.draws < spec.rejection_budget;
           ++attempt) {
        Eigen::VectorXd x;
        draw_vector(x);
        x /= x.norm();  // feature directions live on the unit sphere
        const bool reward_positive = x.dot(theta_reward) > 0.0;
        const bool constraint_positive = x.dot(theta_constraint) > 0.0;
        if (reward_positive && constraint_positive) {
          features.row(a) = x;
          accepted = true;
          break;
        }
        if (!reward_positive) ++st.positivity_reward_rejections;
        if (!constraint_positive) ++st.positivity_constraint_rejections;
      }
      if (!accepted) arms_ok = false;
    }
    if (!arms_ok) continue;

    LinearConstraintProblem problem;
    problem.arm_features = std::move(features);
    problem.theta_reward = std::move(theta_reward);
    problem.theta_constraint = std::move(theta_constraint);
    problem.noise_std = spec.noise_std;
    problem.spec_alpha = spec.alpha;
    problem.seed = spec.seed;
    problem.baseline_arm = select_baseline(
        problem.arm_features, problem.theta_reward, problem.theta_constraint);

    if (problem.optimal_feasible_reward(spec.alpha) < problem.optimal_reward())
      return problem;
    ++st.tradeoff_rejections;
  }

  const char* dominant = "trade-off condition";
  long worst = st.tradeoff_rejections;
  if (st.positivity_reward_rejections > worst) {
    worst = st.positivity_reward_rejections;
    dominant = "reward positivity";
  }
  if (st.positivity_constraint_rejections > worst)
    dominant = "constraint positivity";
  throw GenerationError(
      std::string("generate_synthetic: rejection budget exhausted; most "
                  "frequent failure: ") + dominant,
      st.positivity_reward_rejections, st.positivity_constraint_rejections,
      st.tradeoff_rejections);
}

LinearConstraintProblem::InvariantReport
LinearConstraintProblem::check_invariants() const {
  InvariantReport report;
  report.reward_means_positive =
      ((arm_features * theta_reward).array() > 0.0).all();
  report.constraint_means_positive =
      ((arm_features * theta_constraint).array() > 0.0).all();
  report.tradeoff_holds =
      optimal_feasible_reward(spec_alpha) < optimal_reward();

  const Eigen::VectorXd rewards = arm_features * theta_reward;
  const double baseline_reward = rewards(baseline_arm);
  int strictly_better = 0;
  for (int a = 0; a < num_arms(); ++a)
    if (rewards(a) > baseline_reward) ++strictly_better;
  report.baseline_in_top30 = strictly_better < 30;
  return report;
}

std::string LinearConstraintProblem::to_json() const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["seed"] = seed;
  doc["K"] = num_arms();
  doc["d"] = dim();
  std::vector<double> flat(static_cast<std::size_t>(num_arms()) * dim());
  for (int a = 0; a < num_arms(); ++a)
    for (int j = 0; j < dim(); ++j)
      flat[static_cast<std::size_t>(a) * dim() + j] = arm_features(a, j);
  doc["X"] = flat;
  doc["theta_r"] = std::vector<double>(theta_reward.data(),
                                       theta_reward.data() + dim());
  doc["theta_c"] = std::vector<double>(theta_constraint.data(),
                                       theta_constraint.data() + dim());
  doc["sigma"] = noise_std;
  doc["alpha"] = spec_alpha;
  doc["baseline"] = baseline_arm;
  return doc.dump(2);
}

LinearConstraintProblem LinearConstraintProblem::from_json(
    const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  if (doc.at("version").get<int>() != 1)
    throw std::invalid_argument("problem file: unsupported version");
  LinearConstraintProblem problem;
  const int num_arms = doc.at("K").get<int>();
  const int dim = doc.at("d").get<int>();
  if (num_arms < 1 || dim < 1)
    throw std::invalid_argument("problem file: bad dimensions");
  const auto flat = doc.at("X").get<std::vector<double>>();
  if (flat.size() != static_cast<std::size_t>(num_arms) * dim)
    throw std::invalid_argument("problem file: X size mismatch");
  problem.arm_features.resize(num_arms, dim);
  for (int a = 0; a < num_arms; ++a)
    for (int j = 0; j < dim; ++j)
      problem.arm_features(a, j) = flat[static_cast<std::size_t>(a) * dim + j];
  const auto tr = doc.at("theta_r").get<std::vector<double>>();
  const auto tc = doc.at("theta_c").get<std::vector<double>>();
  if (tr.size() != static_cast<std::size_t>(dim) ||
      tc.size() != static_cast<std::size_t>(dim))
    throw std::invalid_argument("problem file: theta size mismatch");
  problem.theta_reward = Eigen::Map<const Eigen::VectorXd>(tr.data(), dim);
  problem.theta_constraint = Eigen::Map<const Eigen::VectorXd>(tc.data(), dim);
  problem.noise_std = doc.at("sigma").get<double>();
  problem.spec_alpha = doc.at("alpha").get<double>();
  problem.baseline_arm = doc.at("baseline").get<int>();
  problem.seed = doc.at("seed").get<std::uint64_t>();
  if (problem.baseline_arm < 0 || problem.baseline_arm >= num_arms)
    throw std::invalid_argument("problem file: baseline out of range");
  if (!problem.arm_features.allFinite() || !problem.theta_reward.allFinite() ||
      !problem.theta_constraint.allFinite())
    throw std::invalid_argument("problem file: non-finite values");
  return problem;
}

}  // namespace safebandit
