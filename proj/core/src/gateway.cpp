#include "skeptic/gateway.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "skeptic/errors.hpp"
#include "skeptic/text.hpp"

namespace skeptic {

using nlohmann::json;

SolutionAttempt parse_solution(const RawResponse& raw, const std::string& cot_delimiter,
                               const std::string& guest_lang) {
  SolutionAttempt attempt;
  std::string_view text = raw.text;

  std::string_view body = text;
  std::size_t delim = text.find(cot_delimiter);
  if (delim != std::string_view::npos) {
    attempt.cot = std::string(text.substr(0, delim));
    attempt.cot_complete = true;
    body = text.substr(delim + cot_delimiter.size());
  }

  auto blocks = extract_fenced_blocks(body);
  const FencedBlock* chosen = nullptr;
  for (const auto& b : blocks) {
    if (b.info == guest_lang) chosen = &b;
  }
  if (!chosen && !blocks.empty()) chosen = &blocks.back();
  if (chosen) attempt.code = chosen->body;

  attempt.sol = strip_fenced_blocks(body);
  return attempt;
}

// ---------------------------------------------------------------------------
// Mock backend

MockBackend::MockBackend(Script script, std::vector<std::string> fallback)
    : script_(std::move(script)), fallback_(std::move(fallback)) {}

std::unique_ptr<MockBackend> MockBackend::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mock script: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid mock script: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("problems") || !doc["problems"].is_object()) {
    throw ParseError("mock script needs a \"problems\" object");
  }
  Script script;
  for (const auto& [id, arr] : doc["problems"].items()) {
    if (!arr.is_array()) throw ParseError("script entry for \"" + id + "\" must be an array");
    std::vector<std::string> responses;
    for (const auto& r : arr) {
      if (!r.is_string()) throw ParseError("script responses must be strings");
      responses.push_back(r.get<std::string>());
    }
    script[id] = std::move(responses);
  }
  std::vector<std::string> fallback;
  if (doc.contains("default")) {
    for (const auto& r : doc["default"]) fallback.push_back(r.get<std::string>());
  }
  return std::make_unique<MockBackend>(std::move(script), std::move(fallback));
}

std::unique_ptr<GenerationSession> MockBackend::open_session(const std::string& problem_id) {
  auto it = script_.find(problem_id);
  const std::vector<std::string>* responses =
      it != script_.end() ? &it->second : (fallback_.empty() ? nullptr : &fallback_);
  return std::make_unique<MockSession>(responses, problem_id);
}

MockSession::MockSession(const std::vector<std::string>* responses, std::string problem_id)
    : responses_(responses), problem_id_(std::move(problem_id)) {}

RawResponse MockSession::generate(const PromptBundle& prompt, const SamplingParams& params) {
  prompts_seen_.push_back(prompt.text);
  if (!responses_ || cursor_ >= responses_->size()) {
    throw ScriptUnderflowError("mock script exhausted for problem \"" + problem_id_ +
                               "\" after " + std::to_string(cursor_) + " responses");
  }
  RawResponse resp;
  resp.text = (*responses_)[cursor_++];
  // Emulate server-side truncation so budget behavior is testable offline.
  std::size_t budget_bytes = static_cast<std::size_t>(params.max_tokens) * 4;
  if (resp.text.size() > budget_bytes) {
    resp.text.resize(budget_bytes);
    resp.finish_kind = FinishKind::length;
  }
  resp.usage_tokens = static_cast<std::int64_t>(approx_token_length(resp.text));
  return resp;
}

// ---------------------------------------------------------------------------
// Remote backend

namespace {

// Bounds in-flight requests across all sessions of one backend.
class FlightLimiter {
 public:
  explicit FlightLimiter(int n) : available_(n) {}

  void acquire() {
    std::unique_lock lock(m_);
    cv_.wait(lock, [&] { return available_ > 0; });
    --available_;
  }

  void release() {
    {
      std::lock_guard lock(m_);
      ++available_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex m_;
  std::condition_variable cv_;
  int available_;
};

}  // namespace

struct RemoteBackend::Impl {
  RemoteBackendConfig config;
  FlightLimiter limiter;

  explicit Impl(RemoteBackendConfig cfg)
      : config(std::move(cfg)), limiter(config.max_in_flight) {}

  RawResponse generate(const PromptBundle& prompt, const SamplingParams& params) {
    json request = {
        {"model", config.model},
        {"messages", json::array({{{"role", "user"}, {"content", prompt.text}}})},
        {"temperature", params.temperature},
        {"top_p", params.top_p},
        {"max_tokens", params.max_tokens},
    };
    if (params.seed) request["seed"] = *params.seed;
    std::string body = request.dump();

    httplib::Headers headers;
    if (!config.auth_env_var.empty()) {
      if (const char* token = std::getenv(config.auth_env_var.c_str())) {
        headers.emplace("Authorization", std::string("Bearer ") + token);
      }
    }

    limiter.acquire();
    struct Release {
      FlightLimiter& l;
      ~Release() { l.release(); }
    } release{limiter};

    std::string last_error;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      if (attempt > 0) {
        auto delay = config.backoff_base_ms << (attempt - 1);
        std::this_thread::sleep_for(std::chrono::milliseconds(delay));
      }

      httplib::Client client(config.base_url);
      client.set_connection_timeout(30, 0);
      client.set_read_timeout(config.request_timeout_s, 0);
      client.set_write_timeout(60, 0);

      auto result = client.Post(config.path, headers, body, "application/json");
      if (!result) {
        last_error = "transport error: " + httplib::to_string(result.error());
        continue;
      }
      if (result->status >= 500) {
        last_error = "server returned " + std::to_string(result->status);
        continue;
      }
      if (result->status >= 400) {
        throw TransportError("request rejected with status " +
                             std::to_string(result->status) + ": " + result->body);
      }

      json doc;
      try {
        doc = json::parse(result->body);
      } catch (const json::parse_error& e) {
        throw TransportError(std::string("unparseable completion response: ") + e.what());
      }
      if (!doc.contains("choices") || !doc["choices"].is_array() ||
          doc["choices"].empty()) {
        throw TransportError("completion response has no choices");
      }
      const json& choice = doc["choices"][0];

      RawResponse resp;
      resp.retries_used = attempt;
      if (choice.contains("message") && choice["message"].contains("content") &&
          choice["message"]["content"].is_string()) {
        resp.text = choice["message"]["content"].get<std::string>();
      }
      std::string finish = choice.value("finish_reason", "stop");
      resp.finish_kind = finish == "length" ? FinishKind::length : FinishKind::stop;
      if (doc.contains("usage") && doc["usage"].contains("completion_tokens")) {
        resp.usage_tokens = doc["usage"]["completion_tokens"].get<std::int64_t>();
      }
      return resp;
    }
    throw TransportError("generation failed after " + std::to_string(config.max_retries) +
                         " retries: " + last_error);
  }
};

namespace {

class RemoteSession : public GenerationSession {
 public:
  explicit RemoteSession(std::shared_ptr<RemoteBackend::Impl> impl)
      : impl_(std::move(impl)) {}

  RawResponse generate(const PromptBundle& prompt, const SamplingParams& params) override {
    return impl_->generate(prompt, params);
  }

 private:
  std::shared_ptr<RemoteBackend::Impl> impl_;
};

}  // namespace

RemoteBackend::RemoteBackend(RemoteBackendConfig config)
    : impl_(std::make_shared<Impl>(std::move(config))) {}

RemoteBackend::~RemoteBackend() = default;

std::unique_ptr<GenerationSession> RemoteBackend::open_session(const std::string&) {
  return std::make_unique<RemoteSession>(impl_);
}

}  // namespace skeptic
