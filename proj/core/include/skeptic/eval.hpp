#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skeptic/agent.hpp"
#include "skeptic/gateway.hpp"
#include "skeptic/judge.hpp"
#include "skeptic/problem.hpp"

namespace skeptic {

enum class StrategyKind { pass1, random16, longcot16, rejsamp16, reflexion16, skeptical16 };

std::string to_string(StrategyKind k);
std::optional<StrategyKind> strategy_from_string(const std::string& name);

struct StrategySpec {
  StrategyKind kind = StrategyKind::pass1;
  int budget = 16;  // 1 for pass1; generation budget otherwise
  std::optional<AgentConfig> agent;  // skeptical16 only

  static StrategySpec make(StrategyKind kind, int budget = 16);
};

struct StrategyOutcome {
  SolutionAttempt final_attempt;
  int rounds_used = 0;
  std::vector<std::int64_t> response_lengths;
  std::optional<std::string> error;
};

/// Runs one strategy over one problem: pass1 generates once; random16 and
/// longcot16 draw `budget` parallel samples and select among the
/// public-passers (uniformly / by longest reasoning segment); rejsamp16 and
/// reflexion16 sample sequentially until a public pass; skeptical16 runs the
/// refinement loop.
StrategyOutcome run_strategy(const StrategySpec& spec, const Problem& problem,
                             GenerationBackend& backend, const SandboxJudge& judge,
                             const std::optional<ResourceLimits>& limits_override,
                             std::uint64_t rng_seed);

struct PerProblemResult {
  int run = 0;
  std::string problem_id;
  Difficulty difficulty = Difficulty::unknown;
  bool solved = false;
  bool cot_complete = false;
  bool errored = false;
  std::string error;
  int rounds_used = 0;
  std::vector<std::int64_t> response_lengths;
};

struct EvalReport {
  std::vector<PerProblemResult> results;  // ordered by (run, problem index)
  double accuracy_overall = 0.0;
  std::map<std::string, double> accuracy_by_difficulty;  // bucket -> [0,1]
  double avg_refine_rounds = 0.0;
  double avg_response_length = 0.0;
  int runs = 0;
};

struct EvalOptions {
  int runs = 1;
  std::uint64_t seed = 0;
  int concurrency = 1;
  std::optional<ResourceLimits> limits_override;
};

/// Evaluates the strategy over every (run, problem) pair. A final attempt
/// without a complete reasoning segment scores zero; otherwise the final
/// code must pass every private test. Per-problem failures are recorded, not
/// fatal. Deterministic for a fixed seed regardless of concurrency.
EvalReport evaluate(const StrategySpec& spec, const ProblemSet& problems,
                    GenerationBackend& backend, const SandboxJudge& judge,
                    const EvalOptions& options);

/// Accuracy table in the All/Easy/Medium/Hard shape plus round/length
/// statistics.
std::string render_report_table(const EvalReport& report, const std::string& strategy_name);

/// One JSON line per (run, problem) followed by a summary line.
std::string render_report_jsonl(const EvalReport& report);

}  // namespace skeptic
