#include "icrl/core/attempt.hpp"

#include <cstdio>
#include <numeric>

namespace icrl {

const char* to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::Game24:
      return "game24";
    case TaskKind::Writing:
      return "writing";
    case TaskKind::Textworld:
      return "textworld";
  }
  return "game24";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "game24") return TaskKind::Game24;
  if (text == "writing") return TaskKind::Writing;
  if (text == "textworld") return TaskKind::Textworld;
  throw std::invalid_argument("unknown task kind '" + std::string(text) +
                              "' (expected game24, writing or textworld)");
}

double sum_rewards(const std::vector<RewardEntry>& rewards) {
  return std::accumulate(rewards.begin(), rewards.end(), 0.0,
                         [](double acc, const RewardEntry& r) { return acc + r.value; });
}

std::string format_reward(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

}  // namespace icrl
