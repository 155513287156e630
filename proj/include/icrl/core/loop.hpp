#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "icrl/core/buffer.hpp"
#include "icrl/core/config.hpp"
#include "icrl/core/episode_log.hpp"
#include "icrl/core/task.hpp"

namespace icrl {

/// Milliseconds since an arbitrary epoch.
using Clock = std::function<std::int64_t()>;

Clock steady_clock_ms();
/// Always 0; makes logs of scripted runs byte-reproducible.
Clock frozen_clock();

struct LoopHooks {
  Clock clock = steady_clock_ms();
  std::function<void(const EpisodeLog&)> on_episode;
};

/// Generation settings for policy calls derived from a run configuration.
GenerationSettings policy_generation(const RunConfig& config);

/// ICRL prompting on one problem: for k = 1..K, assemble the initial prompt
/// from buffer, instruction and task, run the episode, push the attempt.
/// Backend failures mark the episode failed and the loop continues; an
/// over-long prompt drops the oldest rendered attempts until it fits.
std::vector<EpisodeLog> run_problem(Task& task, const RunConfig& config, Policy& policy,
                                    const LoopHooks& hooks = {});

}  // namespace icrl
