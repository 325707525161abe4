#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skeptic/problem.hpp"

namespace skeptic {

struct ResourceLimits {
  std::int64_t wall_time_ms = 6000;
  std::int64_t memory_bytes = 512LL * 1024 * 1024;
};

enum class ExitKind { exited, timed_out, memory_killed, spawn_failed };

struct ExecutionOutcome {
  std::string stdout_text;
  std::string stderr_text;
  ExitKind exit_kind = ExitKind::exited;
  int exit_code = 0;  // meaningful when exit_kind == exited; 128+sig for signals
  std::int64_t duration_ms = 0;
  bool stdout_truncated = false;
  bool stderr_truncated = false;
};

/// The six judging statuses of real-world contests.
enum class JudgeStatus { AC, WA, TLE, MLE, CE, RE };

std::string to_string(JudgeStatus s);
JudgeStatus judge_status_from_string(const std::string& s);

struct CaseVerdict {
  int case_index = 0;  // 0-based
  JudgeStatus status = JudgeStatus::AC;
  std::optional<std::string> actual_output;  // always set on AC/WA
  std::int64_t duration_ms = 0;
};

struct SuiteVerdict {
  std::vector<CaseVerdict> verdicts;  // in case order; may stop at first failure
  int passed_prefix = 0;              // leading AC count (k*)
  int total = 0;                      // suite size
  bool all_passed = false;
};

/// How guest source is compiled and run. The default targets Python, the
/// solution language used throughout.
struct GuestRuntime {
  // "{file}" is replaced with the path of the written source file.
  std::vector<std::string> run_command = {"python3", "{file}"};
  std::vector<std::string> compile_command = {
      "python3", "-c",
      "import sys; compile(open(sys.argv[1],'rb').read(), sys.argv[1], 'exec')",
      "{file}"};
  std::string source_filename = "solution.py";
  // stderr substrings that mark a guest-level allocation failure; with the
  // address-space cap in place these map to MLE rather than RE.
  std::vector<std::string> oom_stderr_signatures = {"MemoryError"};
  std::int64_t capture_cap_bytes = 8LL * 1024 * 1024;
  std::int64_t kill_grace_ms = 500;
};

/// Executes untrusted guest source against test cases under wall-clock and
/// address-space limits. Safe for concurrent use from many threads; a shared
/// semaphore bounds the number of live child processes.
class SandboxJudge {
 public:
  explicit SandboxJudge(GuestRuntime runtime = {}, int max_concurrent_children = 0);
  ~SandboxJudge();

  SandboxJudge(const SandboxJudge&) = delete;
  SandboxJudge& operator=(const SandboxJudge&) = delete;

  /// Runs the guest compile pass. CE if the source is rejected before any
  /// input is consumed, nothing if it is accepted. Throws EnvironmentError
  /// when the interpreter itself is unusable.
  std::optional<JudgeStatus> compile_check(const std::string& code) const;

  /// Runs `code` with `input` on stdin in a fresh temp directory. Kills the
  /// process group once wall_time_ms elapses; caps the address space at
  /// memory_bytes.
  ExecutionOutcome execute(const std::string& code, const std::string& input,
                           const ResourceLimits& limits) const;

  /// AC iff the outputs match after per-line trailing-whitespace stripping
  /// and removal of trailing blank lines, else WA.
  static JudgeStatus judge_output(const std::string& actual, const std::string& expected);

  CaseVerdict run_case(const std::string& code, const TestCase& test,
                       const ResourceLimits& limits, int case_index = 0) const;

  /// Judges cases in order. With stop_on_first_fail, evaluation halts after
  /// the first non-AC verdict. Throws ValidationError on an empty suite.
  SuiteVerdict run_suite(const std::string& code, std::span<const TestCase> tests,
                         const ResourceLimits& limits, bool stop_on_first_fail) const;

  const GuestRuntime& runtime() const { return runtime_; }

 private:
  CaseVerdict run_compiled_case(const std::string& code, const TestCase& test,
                                const ResourceLimits& limits, int case_index) const;

  GuestRuntime runtime_;
  struct ChildSlots;
  std::shared_ptr<ChildSlots> slots_;
};

}  // namespace skeptic
