#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "skeptic/attempt.hpp"
#include "skeptic/prompts.hpp"

namespace skeptic {

struct SamplingParams {
  double temperature = 0.6;
  double top_p = 0.95;
  std::int64_t max_tokens = 32768;
  std::optional<std::int64_t> seed;
};

enum class FinishKind { stop, length, error };

struct RawResponse {
  std::string text;
  FinishKind finish_kind = FinishKind::stop;
  std::optional<std::int64_t> usage_tokens;
  int retries_used = 0;
};

/// One generation stream tied to a problem. Sessions are not thread-safe;
/// each concurrent task owns its own.
class GenerationSession {
 public:
  virtual ~GenerationSession() = default;
  virtual RawResponse generate(const PromptBundle& prompt, const SamplingParams& params) = 0;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::unique_ptr<GenerationSession> open_session(const std::string& problem_id) = 0;
};

/// Splits a raw completion into (cot, sol, code). cot is the text before the
/// closing delimiter; code is the last guest-language fenced block after it
/// (or anywhere when the delimiter is missing); sol is what remains with
/// fenced blocks removed. Total: never throws, empty code is a valid result.
SolutionAttempt parse_solution(const RawResponse& raw,
                               const std::string& cot_delimiter = "</think>",
                               const std::string& guest_lang = "python");

// ---------------------------------------------------------------------------
// Mock backend

/// Deterministic scripted backend. The script maps problem ids to ordered
/// response texts; every session starts its own cursor at the beginning of
/// its problem's list, so identical call sequences replay identical
/// responses. Throws ScriptUnderflowError when a session exhausts its list.
class MockBackend : public GenerationBackend {
 public:
  using Script = std::map<std::string, std::vector<std::string>>;

  explicit MockBackend(Script script, std::vector<std::string> fallback = {});

  /// Loads the JSON script file format: {"problems": {id: [text, ...]},
  /// "default": [text, ...]}.
  static std::unique_ptr<MockBackend> from_file(const std::string& path);

  std::unique_ptr<GenerationSession> open_session(const std::string& problem_id) override;

 private:
  Script script_;
  std::vector<std::string> fallback_;
};

/// Session type returned by MockBackend; exposed so tests can inspect the
/// prompts it received.
class MockSession : public GenerationSession {
 public:
  MockSession(const std::vector<std::string>* responses, std::string problem_id);

  RawResponse generate(const PromptBundle& prompt, const SamplingParams& params) override;

  const std::vector<std::string>& prompts_seen() const { return prompts_seen_; }
  std::size_t cursor() const { return cursor_; }

 private:
  const std::vector<std::string>* responses_;
  std::string problem_id_;
  std::size_t cursor_ = 0;
  std::vector<std::string> prompts_seen_;
};

// ---------------------------------------------------------------------------
// Remote backend

struct RemoteBackendConfig {
  std::string base_url;              // e.g. "http://localhost:8000"
  std::string model;
  std::string auth_env_var;          // name of the env var holding the token
  std::string path = "/v1/chat/completions";
  int max_retries = 3;               // transient failures only; 4xx is terminal
  std::int64_t backoff_base_ms = 500;
  int max_in_flight = 8;
  std::int64_t request_timeout_s = 600;
};

/// Chat-completion HTTP client with bounded in-flight requests and
/// exponential-backoff retries on transport errors and 5xx responses.
class RemoteBackend : public GenerationBackend {
 public:
  explicit RemoteBackend(RemoteBackendConfig config);
  ~RemoteBackend() override;

  std::unique_ptr<GenerationSession> open_session(const std::string& problem_id) override;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

}  // namespace skeptic
