#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skeptic/gateway.hpp"
#include "skeptic/judge.hpp"
#include "skeptic/problem.hpp"
#include "skeptic/prompts.hpp"

namespace skeptic {

struct AgentConfig {
  int n_max = 16;  // iteration budget N
  int m1 = 4;      // restart after m1 consecutive public failures
  int m2 = 8;      // terminate after m2 consecutive public passes
  SamplingParams sampling;
  std::optional<ResourceLimits> limits_override;  // else the problem's own limits
  RenderOptions render;
};

struct AgentState {
  int c1 = 0;  // consecutive-failure counter, wraps mod m1
  int c2 = 0;  // consecutive-pass counter
  int iteration = 0;
};

/// Counter update after judging one attempt on the public suite:
/// fail -> c1 = (c1 + 1) mod m1, c2 = 0; pass -> c1 = 0, c2 = c2 + 1.
AgentState update_counters(const AgentState& state, bool passed_public, int m1, int m2);

/// What feeds the next round, decided from the post-update counters:
/// c1 > 0 -> failure feedback from the first failing public case;
/// c2 > 0 -> skepticism feedback; both zero -> none (restart).
Feedback choose_feedback(const AgentState& state_after, const SolutionAttempt& attempt,
                         const SuiteVerdict& verdict, const RenderOptions& options = {});

/// Feedback selection recorded per round. `terminal` marks the round on
/// which the termination rule fired; `none` marks a restart (and the last
/// round of a run that exhausted its budget right after a wrap).
enum class RoundFeedback { failure, skeptic, none, terminal };

std::string to_string(RoundFeedback k);

struct AgentRound {
  SolutionAttempt attempt;
  SuiteVerdict public_verdict;
  RoundFeedback feedback_kind = RoundFeedback::none;
  AgentState state_after;
  std::int64_t response_length = 0;  // characters of the raw response
};

struct AgentTrace {
  std::string problem_id;
  std::vector<AgentRound> rounds;
  std::string final_sol;
  std::string final_code;
  int rounds_used = 0;
  std::optional<std::string> error;  // set when the run aborted early
};

/// Judges an attempt on a test list with the loop's conventions: empty code
/// is a synthetic CE on case 0, evaluation stops at the first failure.
SuiteVerdict judge_attempt(const SandboxJudge& judge, const SolutionAttempt& attempt,
                           std::span<const TestCase> tests, const ResourceLimits& limits,
                           bool stop_on_first_fail = true);

/// Runs the full refinement loop over the problem's public tests: generate,
/// judge, update counters, pick feedback; restart after m1 consecutive
/// failures, stop after m2 consecutive passes or when the budget runs out.
/// The final solution is always the last attempt. Backend or judge
/// environment failures end the run early with a partial trace.
AgentTrace refine(const Problem& problem, const AgentConfig& config,
                  GenerationSession& session, const SandboxJudge& judge);

std::string agent_trace_to_json_line(const AgentTrace& trace);

}  // namespace skeptic
