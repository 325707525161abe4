#pragma once

// Definitions are generated at configure time from core/assets/templates.
namespace skeptic::detail {

extern const char* const k_direct_generation;
extern const char* const k_failure_feedback;
extern const char* const k_failure_reason_wa;
extern const char* const k_failure_reason_re;
extern const char* const k_failure_reason_tle;
extern const char* const k_failure_reason_mle;
extern const char* const k_failure_reason_ce;
extern const char* const k_skeptic_feedback;
extern const char* const k_reflexion_round;

}  // namespace skeptic::detail
