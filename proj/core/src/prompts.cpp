#include "skeptic/prompts.hpp"

#include <numeric>

#include "skeptic/errors.hpp"
#include "skeptic/text.hpp"
#include "template_assets.hpp"

namespace skeptic {

std::string to_string(FeedbackKind k) {
  switch (k) {
    case FeedbackKind::failure: return "failure";
    case FeedbackKind::skeptic: return "skeptic";
    case FeedbackKind::none: return "none";
  }
  return "none";
}

namespace templates {

const std::string& direct_generation() {
  static const std::string s{detail::k_direct_generation};
  return s;
}

const std::string& failure_feedback() {
  static const std::string s{detail::k_failure_feedback};
  return s;
}

const std::string& skeptic_feedback() {
  static const std::string s{detail::k_skeptic_feedback};
  return s;
}

const std::string& reflexion_round() {
  static const std::string s{detail::k_reflexion_round};
  return s;
}

const std::string& failure_reason(JudgeStatus status) {
  static const std::string wa{detail::k_failure_reason_wa};
  static const std::string re{detail::k_failure_reason_re};
  static const std::string tle{detail::k_failure_reason_tle};
  static const std::string mle{detail::k_failure_reason_mle};
  static const std::string ce{detail::k_failure_reason_ce};
  switch (status) {
    case JudgeStatus::WA: return wa;
    case JudgeStatus::RE: return re;
    case JudgeStatus::TLE: return tle;
    case JudgeStatus::MLE: return mle;
    case JudgeStatus::CE: return ce;
    case JudgeStatus::AC: break;
  }
  throw ValidationError("no failure explanation exists for AC");
}

}  // namespace templates

namespace {

// Substitutes {name} occurrences in one pass; values are appended verbatim
// and never rescanned, so user content cannot inject placeholders.
std::string substitute(std::string_view text,
                       const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t open = text.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(text.substr(pos));
      break;
    }
    out.append(text.substr(pos, open - pos));
    std::size_t close = text.find('}', open + 1);
    if (close == std::string_view::npos) {
      out.append(text.substr(open));
      break;
    }
    std::string key(text.substr(open + 1, close - open - 1));
    auto it = vars.find(key);
    if (it != vars.end()) {
      out.append(it->second);
      pos = close + 1;
    } else {
      out += '{';
      pos = open + 1;
    }
  }
  return out;
}

std::size_t leading_backticks(std::string_view line) {
  std::size_t n = 0;
  while (n < line.size() && line[n] == '`') ++n;
  return n;
}

}  // namespace

std::string render_template(const std::string& tpl,
                            const std::map<std::string, std::string>& vars) {
  // Walk the template line by line so fences around substituted content can
  // be lengthened when the content itself contains a backtick run.
  std::string out;
  out.reserve(tpl.size());
  std::size_t pos = 0;
  auto next_line = [&](std::size_t from, std::size_t* end) -> std::string_view {
    std::size_t nl = tpl.find('\n', from);
    if (nl == std::string::npos) {
      *end = tpl.size();
      return std::string_view(tpl).substr(from);
    }
    *end = nl + 1;
    return std::string_view(tpl).substr(from, nl - from);
  };

  while (pos < tpl.size()) {
    std::size_t line_end;
    std::string_view line = next_line(pos, &line_end);
    std::size_t open_len = leading_backticks(line);
    if (open_len < 3) {
      out.append(substitute(line, vars));
      if (line_end > pos + line.size()) out += '\n';
      pos = line_end;
      continue;
    }

    std::string info = trim(line.substr(open_len));
    std::vector<std::string> body_lines;
    pos = line_end;
    bool closed = false;
    while (pos < tpl.size()) {
      std::string_view inner = next_line(pos, &line_end);
      std::size_t ticks = leading_backticks(inner);
      if (ticks >= open_len && trim(inner.substr(ticks)).empty()) {
        pos = line_end;
        closed = true;
        break;
      }
      body_lines.push_back(substitute(inner, vars));
      pos = line_end;
    }
    std::string body;
    for (std::size_t i = 0; i < body_lines.size(); ++i) {
      if (i) body += '\n';
      body += body_lines[i];
    }
    std::size_t fence_len = std::max<std::size_t>(3, longest_backtick_run(body) + 1);
    std::string fence(fence_len, '`');
    out += fence + info + '\n' + body + '\n' + fence;
    if (closed) out += '\n';
  }
  // The template assets never end in a newline; drop the one added after a
  // trailing fence close.
  if (!out.empty() && out.back() == '\n' && !tpl.empty() && tpl.back() != '\n') {
    out.pop_back();
  }
  return out;
}

namespace {

PromptBundle render_with_slot(const std::string& statement, const std::string& slot) {
  PromptBundle bundle;
  bundle.template_id = "direct_generation";
  bundle.variable_map = {{"problem statement", statement}, {"prompt for feedback", slot}};
  bundle.text = render_template(templates::direct_generation(), bundle.variable_map);
  return bundle;
}

}  // namespace

PromptBundle render_direct(const std::string& statement, const Feedback& feedback) {
  return render_with_slot(statement,
                          feedback.kind == FeedbackKind::none ? "" : feedback.text);
}

std::string render_failure_reason(JudgeStatus status, const std::string& input,
                                  const std::string& expected, const std::string& actual,
                                  const RenderOptions& options) {
  const std::string& tpl = templates::failure_reason(status);
  std::map<std::string, std::string> vars;
  switch (status) {
    case JudgeStatus::WA:
      vars["test input"] = truncate_payload(input, options.payload_cap_bytes);
      vars["test output"] = truncate_payload(expected, options.payload_cap_bytes);
      vars["sol test output"] = truncate_payload(actual, options.payload_cap_bytes);
      break;
    case JudgeStatus::RE:
    case JudgeStatus::TLE:
    case JudgeStatus::MLE:
      vars["test input"] = truncate_payload(input, options.payload_cap_bytes);
      break;
    case JudgeStatus::CE:
      break;  // no test data in the explanation
    case JudgeStatus::AC:
      throw ValidationError("no failure explanation exists for AC");
  }
  return render_template(tpl, vars);
}

Feedback render_failure_feedback(const std::string& sol, const std::string& code,
                                 const std::string& input, const std::string& expected,
                                 const std::string& actual, JudgeStatus status,
                                 std::optional<int> case_index,
                                 const RenderOptions& options) {
  if (status == JudgeStatus::AC) {
    throw ValidationError("failure feedback requested for a passing case");
  }
  std::string reason = render_failure_reason(status, input, expected, actual, options);
  Feedback fb;
  fb.kind = FeedbackKind::failure;
  fb.origin_status = status;
  fb.origin_case_index = case_index;
  fb.text = render_template(templates::failure_feedback(),
                            {{"analysis", sol}, {"code", code}, {"error reason", reason}});
  return fb;
}

Feedback render_skeptic_feedback(const std::string& sol, const std::string& code,
                                 const RenderOptions& options) {
  (void)options;
  Feedback fb;
  fb.kind = FeedbackKind::skeptic;
  fb.text = render_template(templates::skeptic_feedback(),
                            {{"analysis", sol}, {"code", code}});
  return fb;
}

PromptBundle render_reflexion(const std::string& statement,
                              const std::vector<ReflexionRound>& history,
                              const RenderOptions& options) {
  std::vector<std::string> blocks;
  blocks.reserve(history.size());
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& round = history[i];
    std::string verdict = round.feedback.text.empty() ? "No verdict recorded."
                                                      : round.feedback.text;
    blocks.push_back(render_template(
        templates::reflexion_round(),
        {{"round number", std::to_string(i + 1)},
         {"analysis", round.attempt.sol},
         {"code", round.attempt.code},
         {"verdict summary", verdict}}));
  }

  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size() + 2;
  std::size_t first = 0;
  while (first + 1 < blocks.size() && total > options.history_budget_bytes) {
    total -= blocks[first].size() + 2;
    ++first;
  }

  std::string joined;
  if (first > 0) joined = "[earlier rounds omitted]";
  for (std::size_t i = first; i < blocks.size(); ++i) {
    if (!joined.empty()) joined += "\n\n";
    joined += blocks[i];
  }

  PromptBundle bundle = render_with_slot(statement, joined);
  bundle.template_id = "reflexion";
  return bundle;
}

}  // namespace skeptic
