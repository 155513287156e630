#pragma once

#include <string>
#include <vector>

#include "icrl/core/attempt.hpp"

namespace icrl::textworld {

/// "a -> Observation: o (reward=r)" lines chained with "-> ". Rewards are
/// omitted when `with_rewards` is false.
std::string render_chain(const std::vector<Transition>& transitions, bool with_rewards);

/// "Attempt n:" block ending in the terminal line and "Total reward: N".
/// Throws StructuralError if the record has no terminal line or its reward
/// entries do not match one per rewarded step plus the terminal entry.
std::string render_trajectory(const AttemptRecord& attempt, bool zero_rewards);

/// Builds the rewards list for a finished episode: one entry per step with
/// nonzero reward, then the terminal entry.
std::vector<RewardEntry> trajectory_rewards(const std::vector<Transition>& transitions,
                                            int terminal_reward = 0);

}  // namespace icrl::textworld
