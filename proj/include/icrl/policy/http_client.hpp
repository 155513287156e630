#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "icrl/policy/policy.hpp"

namespace icrl {

/// Spaces requests evenly so that at most `requests_per_minute` start in any
/// minute. Zero disables limiting. Shared by every backend in the process.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute = 0.0);
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_{};
};

struct HttpPolicyConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4.1";
  std::string api_key_env = "OPENAI_API_KEY";
  int timeout_s = 120;
  int max_retries = 5;
  int backoff_initial_ms = 1000;
  int backoff_max_ms = 30000;
};

/// Builds the chat-completions request body (single system + single user message).
nlohmann::json build_chat_request(const std::string& model, const GenRequest& request);

/// Extracts text, finish reason and usage from a chat-completions response body.
GenResponse parse_chat_response(const nlohmann::json& body);

/// True when an error body reports that the prompt exceeded the context window.
bool is_context_overflow(int status, const std::string& body);

/// OpenAI-compatible chat-completions backend with retry and backoff on
/// 429/5xx/transport errors.
class HttpPolicy : public Policy {
 public:
  /// Reads the API key from the environment variable named in `config`;
  /// throws BackendError when it is unset.
  HttpPolicy(HttpPolicyConfig config, std::shared_ptr<RateLimiter> limiter);

  /// Explicit key, bypassing the environment (tests against local mocks).
  HttpPolicy(HttpPolicyConfig config, std::string api_key, std::shared_ptr<RateLimiter> limiter);

  GenResponse generate(const GenRequest& request) override;
  std::string backend_id() const override { return "http:" + config_.model; }

  /// Replaces the sleep used between retries.
  void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleep_ = std::move(sleeper);
  }

  int last_attempts() const { return last_attempts_; }

 private:
  HttpPolicyConfig config_;
  std::string api_key_;
  std::shared_ptr<RateLimiter> limiter_;
  std::function<void(std::chrono::milliseconds)> sleep_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  int last_attempts_ = 0;
};

}  // namespace icrl
