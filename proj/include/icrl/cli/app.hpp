#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "icrl/core/config.hpp"
#include "icrl/core/episode_log.hpp"
#include "icrl/core/task.hpp"
#include "icrl/policy/http_client.hpp"

namespace icrl::cli {

/// Scripted backends read their script file; HTTP backends read the API key
/// from the environment variable named in the settings (ICRL_BASE_URL, when
/// set, overrides the base URL).
std::unique_ptr<Policy> make_backend(const BackendSettings& settings,
                                     std::shared_ptr<RateLimiter> limiter);

/// Problem instances named by the config. `judge` must outlive the tasks;
/// text-world tasks ignore it.
std::vector<std::unique_ptr<Task>> make_tasks(const RunConfig& config, Policy& judge);

struct RunOptions {
  bool frozen_clock = false;  // wall_ms = 0, for byte-reproducible logs
  std::string prompts_dir;    // when set, every episode prompt is saved there
  std::string method_label;   // overrides EpisodeLog.method (ablation variants)
};

/// Runs config.method over every problem with up to config.parallel
/// workers. Logs come back in problem order regardless of scheduling.
std::vector<EpisodeLog> run_experiment(const RunConfig& config, const RunOptions& options = {});

/// The five ablation variants: zero_rewards, short_context,
/// exploration_only, exploitation_only, no_ee.
std::vector<std::pair<std::string, RunConfig>> ablation_variants(const RunConfig& base);

/// Entry point; `args` excludes the program name. Returns the exit status.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace icrl::cli
