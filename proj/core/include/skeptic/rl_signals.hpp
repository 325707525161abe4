#pragma once

#include <cstddef>
#include <vector>

#include "skeptic/attempt.hpp"
#include "skeptic/judge.hpp"

namespace skeptic {

struct RolloutGroup {
  std::vector<double> rewards;

  std::size_t group_size() const { return rewards.size(); }
};

struct AdvantageVector {
  std::vector<double> advantages;
};

/// Dense reward (k* / |T|)^2 where k* is the count of leading passed cases.
/// 1.0 iff the whole suite passed.
double squared_incentive_reward(const SuiteVerdict& verdict);

/// Binary reward: 1 iff every case passed, else 0.
double pass_or_fail_reward(const SuiteVerdict& verdict);

/// Zeroes the reward when the response lacks the closing reasoning
/// delimiter.
double gate_reward(const SolutionAttempt& attempt, double reward);

/// Group-standardized advantages (population std). A group with all-equal
/// rewards, including a singleton, yields all zeros.
AdvantageVector group_advantages(const RolloutGroup& group);

/// Clipped surrogate objective value, no KL term:
/// (1/G) * sum_i min(s_i * A_i, clip(s_i, 1-eps, 1+eps) * A_i).
/// Throws ValidationError when the vectors differ in length or are empty.
double grpo_objective(const std::vector<double>& ratios,
                      const std::vector<double>& advantages, double epsilon = 0.2);

}  // namespace skeptic
