#include "icrl/core/loop.hpp"

#include <chrono>

namespace icrl {

Clock steady_clock_ms() {
  return [] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  };
}

Clock frozen_clock() {
  return [] { return std::int64_t{0}; };
}

GenerationSettings policy_generation(const RunConfig& config) {
  GenerationSettings g;
  g.temperature = config.policy.temperature;
  g.max_output_tokens = config.policy.max_output_tokens;
  g.seed = config.seed;
  return g;
}

std::vector<EpisodeLog> run_problem(Task& task, const RunConfig& config, Policy& policy,
                                    const LoopHooks& hooks) {
  ExperienceBuffer buffer(config.buffer_capacity);
  std::vector<EpisodeLog> logs;
  const Clock clock = hooks.clock ? hooks.clock : frozen_clock();

  for (int k = 1; k <= config.episodes; ++k) {
    EpisodeLog log;
    log.method = to_string(Method::Icrl);
    log.task = to_string(task.kind());
    log.problem_id = task.problem_id();
    log.episode = k;
    log.instruction_kind = select_instruction(config.schedule, k, buffer.size());

    EpisodeContext ctx{task.problem_id(), k, policy_generation(config)};
    std::size_t shown = buffer.size();
    const std::int64_t start = clock();
    std::optional<EpisodeOutcome> outcome;

    while (true) {
      PromptBundle bundle = assemble_prompt(buffer.newest(shown), task.task_text(),
                                            log.instruction_kind, config.prompt_layout,
                                            config.zero_rewards, task.kind());
      log.prompt = bundle.user_text;
      log.prompt_chars = bundle.user_text.size();
      log.evicted_attempts = static_cast<int>(buffer.size() - shown);
      if (config.max_prompt_chars && bundle.user_text.size() > *config.max_prompt_chars &&
          shown > 0) {
        --shown;
        continue;
      }
      try {
        outcome = task.run_episode(bundle.user_text, policy, ctx);
      } catch (const ContextOverflowError& e) {
        if (shown > 0) {
          --shown;
          continue;
        }
        log.diagnostics.push_back(std::string("context overflow with empty context: ") + e.what());
      } catch (const BackendError& e) {
        log.diagnostics.push_back(std::string("backend failure: ") + e.what());
      }
      break;
    }
    if (log.evicted_attempts > 0) {
      log.diagnostics.push_back("context overflow: dropped " +
                                std::to_string(log.evicted_attempts) + " oldest attempts");
    }

    if (outcome) {
      outcome->attempt.episode_index = k;
      log.response = outcome->attempt.response_text;
      log.rewards = outcome->attempt.rewards;
      log.total_reward = outcome->attempt.total_reward;
      log.ground_truth = outcome->ground_truth;
      log.tokens_in = outcome->tokens_in;
      log.tokens_out = outcome->tokens_out;
      log.calls = outcome->policy_calls + outcome->judge_calls;
      log.diagnostics.insert(log.diagnostics.end(), outcome->diagnostics.begin(),
                             outcome->diagnostics.end());
      buffer.push(std::move(outcome->attempt));
    } else {
      log.failed = true;
      if (task.kind() != TaskKind::Writing) log.ground_truth = 0.0;
    }
    log.wall_ms = clock() - start;

    if (hooks.on_episode) hooks.on_episode(log);
    logs.push_back(std::move(log));
  }
  return logs;
}

}  // namespace icrl
