#include "skeptic/rl_signals.hpp"

#include <algorithm>
#include <cmath>

#include "skeptic/errors.hpp"

namespace skeptic {

double squared_incentive_reward(const SuiteVerdict& verdict) {
  if (verdict.total < 1) throw ValidationError("verdict covers an empty suite");
  double ratio = static_cast<double>(verdict.passed_prefix) /
                 static_cast<double>(verdict.total);
  return ratio * ratio;
}

double pass_or_fail_reward(const SuiteVerdict& verdict) {
  if (verdict.total < 1) throw ValidationError("verdict covers an empty suite");
  return verdict.all_passed ? 1.0 : 0.0;
}

double gate_reward(const SolutionAttempt& attempt, double reward) {
  return attempt.cot_complete ? reward : 0.0;
}

AdvantageVector group_advantages(const RolloutGroup& group) {
  if (group.rewards.empty()) throw ValidationError("empty rollout group");
  const auto& r = group.rewards;

  bool all_equal = std::all_of(r.begin(), r.end(), [&](double x) { return x == r[0]; });
  if (all_equal) return AdvantageVector{std::vector<double>(r.size(), 0.0)};

  double mean = 0.0;
  for (double x : r) mean += x;
  mean /= static_cast<double>(r.size());

  double var = 0.0;
  for (double x : r) var += (x - mean) * (x - mean);
  var /= static_cast<double>(r.size());  // population variance
  double std_dev = std::sqrt(var);
  if (std_dev == 0.0) return AdvantageVector{std::vector<double>(r.size(), 0.0)};

  AdvantageVector out;
  out.advantages.reserve(r.size());
  for (double x : r) out.advantages.push_back((x - mean) / std_dev);
  return out;
}

double grpo_objective(const std::vector<double>& ratios,
                      const std::vector<double>& advantages, double epsilon) {
  if (ratios.size() != advantages.size()) {
    throw ValidationError("ratio/advantage length mismatch");
  }
  if (ratios.empty()) throw ValidationError("empty rollout group");
  if (epsilon <= 0.0) throw ValidationError("epsilon must be positive");

  double sum = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    double clipped = std::clamp(ratios[i], 1.0 - epsilon, 1.0 + epsilon);
    sum += std::min(ratios[i] * advantages[i], clipped * advantages[i]);
  }
  return sum / static_cast<double>(ratios.size());
}

}  // namespace skeptic
