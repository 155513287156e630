#include "icrl/textworld/render.hpp"

#include <cmath>

namespace icrl::textworld {

namespace {

std::string bare(double value) { return std::to_string(std::llround(value)); }

}  // namespace

std::string render_chain(const std::vector<Transition>& transitions, bool with_rewards) {
  std::string out;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const Transition& t = transitions[i];
    if (i > 0) out += "\n-> ";
    out += t.action + " -> Observation: " + t.observation;
    if (with_rewards) out += " (reward=" + std::to_string(t.reward) + ")";
  }
  return out;
}

std::vector<RewardEntry> trajectory_rewards(const std::vector<Transition>& transitions,
                                            int terminal_reward) {
  std::vector<RewardEntry> out;
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    if (transitions[i].reward != 0) {
      out.push_back({"step" + std::to_string(i + 1), static_cast<double>(transitions[i].reward)});
    }
  }
  out.push_back({"terminal", static_cast<double>(terminal_reward)});
  return out;
}

std::string render_trajectory(const AttemptRecord& attempt, bool zero_rewards) {
  if (!attempt.outcome_note) throw StructuralError("trajectory has no terminal line");
  std::size_t rewarded = 0;
  for (const auto& t : attempt.transitions) rewarded += t.reward != 0;
  if (attempt.rewards.size() != rewarded + 1) {
    throw StructuralError("trajectory needs " + std::to_string(rewarded + 1) + " rewards, got " +
                          std::to_string(attempt.rewards.size()));
  }

  std::vector<Transition> shown = attempt.transitions;
  if (zero_rewards) {
    for (auto& t : shown) t.reward = 0;
  }
  std::string out = "Attempt " + std::to_string(attempt.episode_index) + ":\n";
  if (!shown.empty()) out += render_chain(shown, true) + "\n";
  const double terminal = zero_rewards ? 0.0 : attempt.rewards.back().value;
  const double total = zero_rewards ? 0.0 : attempt.total_reward;
  out += *attempt.outcome_note + " (reward=" + bare(terminal) + ") Total reward: " + bare(total);
  return out;
}

}  // namespace icrl::textworld
