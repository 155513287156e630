#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "icrl/policy/http_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace icrl {

RateLimiter::RateLimiter(double requests_per_minute) {
  if (requests_per_minute > 0.0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(60.0 / requests_per_minute));
  }
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

nlohmann::json build_chat_request(const std::string& model, const GenRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  if (request.system_text) {
    messages.push_back({{"role", "system"}, {"content", *request.system_text}});
  }
  messages.push_back({{"role", "user"}, {"content", request.user_text}});
  nlohmann::json body = {{"model", model},
                         {"messages", messages},
                         {"temperature", request.temperature},
                         {"max_tokens", request.max_output_tokens}};
  if (!request.stop_sequences.empty()) body["stop"] = request.stop_sequences;
  if (request.seed) body["seed"] = *request.seed;
  return body;
}

GenResponse parse_chat_response(const nlohmann::json& body) {
  if (!body.contains("choices") || !body["choices"].is_array() || body["choices"].empty()) {
    throw BackendError("chat response has no choices");
  }
  const auto& choice = body["choices"][0];
  GenResponse out;
  const auto& content = choice.at("message").at("content");
  out.text = content.is_null() ? std::string{} : content.get<std::string>();
  std::string reason = choice.value("finish_reason", std::string("stop"));
  out.finish_reason = reason == "length" ? FinishReason::Length : FinishReason::Stop;
  if (body.contains("usage") && body["usage"].is_object()) {
    out.tokens_in = body["usage"].value("prompt_tokens", std::int64_t{0});
    out.tokens_out = body["usage"].value("completion_tokens", std::int64_t{0});
  }
  return out;
}

bool is_context_overflow(int status, const std::string& body) {
  if (status != 400 && status != 413) return false;
  if (body.find("context_length_exceeded") != std::string::npos) return true;
  return body.find("maximum context length") != std::string::npos;
}

namespace {

void split_url(const std::string& url, std::string& scheme_host_port, std::string& path) {
  auto scheme_end = url.find("://");
  auto host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto slash = url.find('/', host_begin);
  if (slash == std::string::npos) {
    scheme_host_port = url;
    path.clear();
  } else {
    scheme_host_port = url.substr(0, slash);
    path = url.substr(slash);
  }
  while (!path.empty() && path.back() == '/') path.pop_back();
}

std::string read_key(const std::string& env) {
  const char* value = std::getenv(env.c_str());
  if (value == nullptr || *value == '\0') {
    throw BackendError("API key environment variable " + env + " is not set");
  }
  return value;
}

}  // namespace

HttpPolicy::HttpPolicy(HttpPolicyConfig config, std::shared_ptr<RateLimiter> limiter)
    : HttpPolicy(config, read_key(config.api_key_env), std::move(limiter)) {}

HttpPolicy::HttpPolicy(HttpPolicyConfig config, std::string api_key,
                       std::shared_ptr<RateLimiter> limiter)
    : config_(std::move(config)),
      api_key_(std::move(api_key)),
      limiter_(limiter ? std::move(limiter) : std::make_shared<RateLimiter>()),
      sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
  split_url(config_.base_url, scheme_host_port_, path_prefix_);
}

GenResponse HttpPolicy::generate(const GenRequest& request) {
  const std::string body = build_chat_request(config_.model, request).dump();
  const std::string path = path_prefix_ + "/chat/completions";
  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};

  std::string last_error;
  last_attempts_ = 0;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    ++last_attempts_;
    limiter_->acquire();

    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    client.set_write_timeout(config_.timeout_s, 0);
    auto result = client.Post(path, headers, body, "application/json");

    std::chrono::milliseconds wait(
        std::min<long long>(static_cast<long long>(config_.backoff_initial_ms) << std::min(attempt, 20),
                            config_.backoff_max_ms));
    if (!result) {
      last_error = "transport error: " + httplib::to_string(result.error());
    } else if (result->status == 200) {
      try {
        return parse_chat_response(nlohmann::json::parse(result->body));
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("malformed chat response: ") + e.what());
      }
    } else if (is_context_overflow(result->status, result->body)) {
      throw ContextOverflowError("context length exceeded: " + result->body);
    } else if (result->status == 429 || result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      if (result->has_header("Retry-After")) {
        long long seconds = std::atoll(result->get_header_value("Retry-After").c_str());
        if (seconds > 0) {
          wait = std::chrono::milliseconds(
              std::min<long long>(seconds * 1000, config_.backoff_max_ms));
        }
      }
    } else {
      throw BackendError("HTTP " + std::to_string(result->status) + ": " + result->body);
    }

    if (attempt < config_.max_retries) sleep_(wait);
  }
  throw BackendError("retries exhausted after " + std::to_string(last_attempts_) +
                     " attempts: " + last_error);
}

}  // namespace icrl
