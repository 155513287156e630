#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace icrl {

enum class CallRole { Policy, Judge };

/// Identifies where a generation call comes from. Scripted backends key
/// their canned responses on this; HTTP backends ignore it.
struct CallTag {
  std::string problem_id;
  int episode = 0;
  CallRole role = CallRole::Policy;
};

struct GenRequest {
  std::optional<std::string> system_text;
  std::string user_text;
  double temperature = 1.0;
  int max_output_tokens = 1024;
  std::vector<std::string> stop_sequences;
  std::string backend_id;
  std::optional<std::uint64_t> seed;
  CallTag tag;
};

enum class FinishReason { Stop, Length, Error };

const char* to_string(FinishReason reason);

struct GenResponse {
  std::string text;
  std::int64_t tokens_in = 0;
  std::int64_t tokens_out = 0;
  FinishReason finish_reason = FinishReason::Stop;
};

/// Transport failure after retries were exhausted. The core loop marks the
/// episode failed and moves on.
class BackendError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The backend rejected the prompt as too long for its context window.
class ContextOverflowError : public BackendError {
 public:
  using BackendError::BackendError;
};

/// A scripted policy could not serve a request (missing key, exhausted
/// script, failed prompt expectation). Never swallowed by the loop.
class ScriptError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A text-generation backend. Serves both policy and judge calls; it only
/// transports text.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual GenResponse generate(const GenRequest& request) = 0;
  virtual std::string backend_id() const = 0;
};

/// Rough token estimate used by offline backends (4 chars per token).
std::int64_t estimate_tokens(const std::string& text);

/// Wraps a callable; handy for tests and for in-process fakes.
class FunctionPolicy : public Policy {
 public:
  using Fn = std::function<std::string(const GenRequest&)>;

  explicit FunctionPolicy(Fn fn, std::string id = "function")
      : fn_(std::move(fn)), id_(std::move(id)) {}

  GenResponse generate(const GenRequest& request) override;
  std::string backend_id() const override { return id_; }

 private:
  Fn fn_;
  std::string id_;
};

}  // namespace icrl
