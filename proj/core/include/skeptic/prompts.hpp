#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skeptic/attempt.hpp"
#include "skeptic/judge.hpp"

namespace skeptic {

enum class FeedbackKind { failure, skeptic, none };

std::string to_string(FeedbackKind k);

/// A rendered feedback fragment for the next generation round.
struct Feedback {
  FeedbackKind kind = FeedbackKind::none;
  std::string text;
  std::optional<JudgeStatus> origin_status;  // set iff kind == failure
  std::optional<int> origin_case_index;

  static Feedback none_feedback() { return {}; }
};

struct PromptBundle {
  std::string text;  // combined system+user text sent as a single message
  std::string template_id;
  std::map<std::string, std::string> variable_map;
};

struct RenderOptions {
  // Test payloads embedded in feedback are cut at this many bytes.
  std::size_t payload_cap_bytes = 4096;
  // Byte budget for the concatenated history in iterative-history prompts;
  // oldest rounds are dropped first when exceeded.
  std::size_t history_budget_bytes = 65536;
};

/// The base generation prompt. With kind == none the additional-messages
/// slot is rendered empty; otherwise it carries the feedback text verbatim.
PromptBundle render_direct(const std::string& statement, const Feedback& feedback);

/// Failure-driven feedback: the failed solution's analysis and code plus a
/// per-status failure explanation. WA embeds input/expected/actual, RE/TLE/
/// MLE embed only the input, CE embeds no test data. Throws ValidationError
/// for status == AC.
Feedback render_failure_feedback(const std::string& sol, const std::string& code,
                                 const std::string& input, const std::string& expected,
                                 const std::string& actual, JudgeStatus status,
                                 std::optional<int> case_index = std::nullopt,
                                 const RenderOptions& options = {});

/// Skepticism-driven feedback: re-check the passing solution against the
/// three-item checklist. Sees only the solution text and code, never any
/// test data.
Feedback render_skeptic_feedback(const std::string& sol, const std::string& code,
                                 const RenderOptions& options = {});

/// Just the per-status failure explanation (the reason block embedded by
/// render_failure_feedback); also used as the verdict summary in history
/// prompts.
std::string render_failure_reason(JudgeStatus status, const std::string& input,
                                  const std::string& expected, const std::string& actual,
                                  const RenderOptions& options = {});

/// History entry for the full-history baseline prompt.
struct ReflexionRound {
  SolutionAttempt attempt;
  Feedback feedback;  // verdict summary shown for this round
};

/// Base prompt whose additional-messages slot replays every prior round
/// (solution, code, verdict) under numbered headers, oldest first. Oldest
/// rounds are dropped with a marker when the history budget is exceeded.
PromptBundle render_reflexion(const std::string& statement,
                              const std::vector<ReflexionRound>& history,
                              const RenderOptions& options = {});

namespace templates {

/// Raw template assets (checked in under core/assets/templates and embedded
/// at build time). Placeholders use {name} syntax.
const std::string& direct_generation();
const std::string& failure_feedback();
const std::string& failure_reason(JudgeStatus status);  // not defined for AC
const std::string& skeptic_feedback();
const std::string& reflexion_round();

}  // namespace templates

/// Substitutes {name} placeholders from `vars`. Unknown placeholders pass
/// through verbatim; substituted values are never rescanned. Fences around a
/// placeholder are lengthened when the value itself contains a fence run.
std::string render_template(const std::string& tpl,
                            const std::map<std::string, std::string>& vars);

}  // namespace skeptic
