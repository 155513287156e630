#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icrl/core/attempt.hpp"
#include "icrl/core/instruction.hpp"

namespace icrl {

struct EpisodeLog {
  std::string method = "icrl";
  std::string task = "game24";
  std::string problem_id;
  int episode = 0;
  InstructionKind instruction_kind = InstructionKind::None;
  std::string prompt;  // kept in memory; only its length is persisted
  std::size_t prompt_chars = 0;
  std::string response;
  std::vector<RewardEntry> rewards;
  double total_reward = 0.0;
  std::optional<double> ground_truth;
  std::int64_t tokens_in = 0;
  std::int64_t tokens_out = 0;
  std::int64_t wall_ms = 0;
  int calls = 0;
  bool failed = false;
  int evicted_attempts = 0;
  std::vector<std::string> diagnostics;
};

nlohmann::json to_json(const EpisodeLog& log);
EpisodeLog episode_log_from_json(const nlohmann::json& j);

/// One JSON object per line.
void write_jsonl(std::ostream& out, const std::vector<EpisodeLog>& logs);
std::vector<EpisodeLog> read_jsonl(std::istream& in);

}  // namespace icrl
