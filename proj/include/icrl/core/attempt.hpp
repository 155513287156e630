#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace icrl {

enum class TaskKind { Game24, Writing, Textworld };

const char* to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view text);

/// Thrown when a record or buffer operation would break a structural
/// invariant (reward count, episode ordering).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RewardEntry {
  std::string label;
  double value = 0.0;

  bool operator==(const RewardEntry&) const = default;
};

/// One environment step of a text-world episode.
struct Transition {
  std::string action;
  std::string observation;
  int reward = 0;

  bool operator==(const Transition&) const = default;
};

/// One episode's response with its positioned rewards: the unit stored in
/// the experience buffer.
struct AttemptRecord {
  int episode_index = 0;
  std::string response_text;
  std::vector<RewardEntry> rewards;
  double total_reward = 0.0;
  std::optional<std::string> outcome_note;
  std::string header;                   // "Input: 4 9 10 13." for game24
  std::vector<Transition> transitions;  // text-world episodes only

  bool operator==(const AttemptRecord&) const = default;
};

double sum_rewards(const std::vector<RewardEntry>& rewards);

/// "3.00"
std::string format_reward(double value);

}  // namespace icrl
