#include "icrl/core/episode_log.hpp"

#include <istream>
#include <ostream>

namespace icrl {

nlohmann::json to_json(const EpisodeLog& log) {
  nlohmann::json rewards = nlohmann::json::array();
  for (const auto& r : log.rewards) rewards.push_back({{"label", r.label}, {"value", r.value}});
  nlohmann::json j = {
      {"method", log.method},
      {"task", log.task},
      {"problem_id", log.problem_id},
      {"episode", log.episode},
      {"instruction_kind", to_string(log.instruction_kind)},
      {"prompt_chars", log.prompt_chars},
      {"response", log.response},
      {"rewards", rewards},
      {"total_reward", log.total_reward},
      {"ground_truth", log.ground_truth ? nlohmann::json(*log.ground_truth) : nlohmann::json()},
      {"tokens_in", log.tokens_in},
      {"tokens_out", log.tokens_out},
      {"wall_ms", log.wall_ms},
      {"calls", log.calls},
      {"failed", log.failed},
      {"evicted_attempts", log.evicted_attempts},
      {"diagnostics", log.diagnostics},
  };
  return j;
}

EpisodeLog episode_log_from_json(const nlohmann::json& j) {
  EpisodeLog log;
  log.method = j.value("method", std::string("icrl"));
  log.task = j.value("task", std::string("game24"));
  log.problem_id = j.at("problem_id").get<std::string>();
  log.episode = j.at("episode").get<int>();
  log.instruction_kind = parse_instruction_kind(j.at("instruction_kind").get<std::string>());
  log.prompt_chars = j.at("prompt_chars").get<std::size_t>();
  log.response = j.at("response").get<std::string>();
  for (const auto& r : j.at("rewards")) {
    log.rewards.push_back({r.at("label").get<std::string>(), r.at("value").get<double>()});
  }
  log.total_reward = j.at("total_reward").get<double>();
  if (!j.at("ground_truth").is_null()) log.ground_truth = j.at("ground_truth").get<double>();
  log.tokens_in = j.at("tokens_in").get<std::int64_t>();
  log.tokens_out = j.at("tokens_out").get<std::int64_t>();
  log.wall_ms = j.at("wall_ms").get<std::int64_t>();
  log.calls = j.value("calls", 0);
  log.failed = j.value("failed", false);
  log.evicted_attempts = j.value("evicted_attempts", 0);
  if (j.contains("diagnostics")) log.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return log;
}

void write_jsonl(std::ostream& out, const std::vector<EpisodeLog>& logs) {
  for (const auto& log : logs) out << to_json(log).dump() << '\n';
}

std::vector<EpisodeLog> read_jsonl(std::istream& in) {
  std::vector<EpisodeLog> logs;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    logs.push_back(episode_log_from_json(nlohmann::json::parse(line)));
  }
  return logs;
}

}  // namespace icrl
