#include "icrl/policy/policy.hpp"

namespace icrl {

const char* to_string(FinishReason reason) {
  switch (reason) {
    case FinishReason::Stop:
      return "stop";
    case FinishReason::Length:
      return "length";
    case FinishReason::Error:
      return "error";
  }
  return "error";
}

std::int64_t estimate_tokens(const std::string& text) {
  return static_cast<std::int64_t>((text.size() + 3) / 4);
}

GenResponse FunctionPolicy::generate(const GenRequest& request) {
  GenResponse response;
  response.text = fn_(request);
  response.tokens_in = estimate_tokens(request.user_text);
  response.tokens_out = estimate_tokens(response.text);
  return response;
}

}  // namespace icrl
