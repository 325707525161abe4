#pragma once

#include <optional>
#include <string>

namespace skeptic {

/// One parsed model response: reasoning segment, solution analysis, and the
/// extracted guest-language code.
struct SolutionAttempt {
  std::optional<std::string> cot;  // text before the closing delimiter
  std::string sol;                 // analysis text, fenced blocks removed
  std::string code;                // last guest-language fenced block, or empty
  bool cot_complete = false;       // closing delimiter was present
};

}  // namespace skeptic
