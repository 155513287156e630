#include "icrl/core/config.hpp"

#include <stdexcept>
#include <string>

namespace icrl {

const char* to_string(Method method) {
  switch (method) {
    case Method::Icrl:
      return "icrl";
    case Method::Cot:
      return "cot";
    case Method::LongCot:
      return "long_cot";
    case Method::BestOfN:
      return "best_of_n";
    case Method::SelfRefine:
      return "self_refine";
    case Method::Reflexion:
      return "reflexion";
  }
  return "icrl";
}

Method parse_method(std::string_view text) {
  if (text == "icrl") return Method::Icrl;
  if (text == "cot") return Method::Cot;
  if (text == "long_cot") return Method::LongCot;
  if (text == "best_of_n") return Method::BestOfN;
  if (text == "self_refine") return Method::SelfRefine;
  if (text == "reflexion") return Method::Reflexion;
  throw std::invalid_argument(
      "unknown method '" + std::string(text) +
      "' (expected icrl, cot, long_cot, best_of_n, self_refine or reflexion)");
}

void RunConfig::validate() const {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (buffer_capacity && *buffer_capacity == 0) {
    throw std::invalid_argument("buffer_capacity must be positive or \"unbounded\"");
  }
  if (!is_valid_layout({prompt_layout.begin(), prompt_layout.end()})) {
    throw std::invalid_argument("prompt_layout must name buffer, instruction and task once each");
  }
  if (best_of_n < 1) throw std::invalid_argument("best_of_n must be >= 1");
  if (reflection_window < 1) throw std::invalid_argument("reflection_window must be >= 1");
  if (parallel < 1) throw std::invalid_argument("parallel must be >= 1");
  for (const auto* b : {&policy, &judge}) {
    if (b->backend != "scripted" && b->backend != "http") {
      throw std::invalid_argument("backend must be \"scripted\" or \"http\", got \"" + b->backend + "\"");
    }
    if (b->temperature < 0.0 || b->temperature > 2.0) {
      throw std::invalid_argument("temperature must be within [0, 2]");
    }
    if (b->max_output_tokens < 1) throw std::invalid_argument("max_output_tokens must be >= 1");
  }
}

}  // namespace icrl
