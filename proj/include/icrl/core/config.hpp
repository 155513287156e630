#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icrl/core/attempt.hpp"
#include "icrl/core/instruction.hpp"
#include "icrl/core/prompt.hpp"

namespace icrl {

struct BackendSettings {
  std::string backend = "scripted";  // "scripted" or "http"
  std::string script;                // scripted: path to the script file
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-4.1";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 1.0;
  int max_output_tokens = 1024;
  int timeout_s = 120;
  int max_retries = 5;
  double requests_per_minute = 0.0;
};

enum class Method { Icrl, Cot, LongCot, BestOfN, SelfRefine, Reflexion };

const char* to_string(Method method);
Method parse_method(std::string_view text);

struct RunConfig {
  std::string name = "run";
  TaskKind task_kind = TaskKind::Game24;
  Method method = Method::Icrl;
  Schedule schedule = Schedule::Preset;
  int episodes = 50;
  std::optional<std::size_t> buffer_capacity;  // unbounded when empty
  bool zero_rewards = false;
  PromptLayout prompt_layout = default_layout(TaskKind::Game24);
  std::optional<std::size_t> max_prompt_chars;
  BackendSettings policy;
  BackendSettings judge = [] {
    BackendSettings j;
    j.temperature = 0.0;
    return j;
  }();
  std::uint64_t seed = 0;

  int best_of_n = 50;
  std::size_t reflection_window = 3;

  std::string problems;     // game24 / writing problem file
  std::optional<int> problem_limit;
  std::string base_answer;  // writing: base answer text file
  std::vector<std::string> worlds;  // textworld: world spec files
  std::string env_command;  // textworld: external environment command (stdio adapter)
  int parallel = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace icrl
