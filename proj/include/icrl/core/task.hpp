#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "icrl/core/attempt.hpp"
#include "icrl/policy/policy.hpp"

namespace icrl {

struct GenerationSettings {
  double temperature = 1.0;
  int max_output_tokens = 1024;
  std::optional<std::uint64_t> seed;
};

struct EpisodeContext {
  std::string problem_id;
  int episode = 1;
  GenerationSettings generation;
};

struct EpisodeOutcome {
  AttemptRecord attempt;
  std::optional<double> ground_truth;  // r*; absent when only an external evaluator knows it
  std::int64_t tokens_in = 0;
  std::int64_t tokens_out = 0;
  int policy_calls = 0;
  int judge_calls = 0;
  std::vector<std::string> diagnostics;
};

/// One problem instance of a task, bundled with its reward function (step
/// judge, coherence judge, or environment). Tasks are used by one worker at
/// a time.
class Task {
 public:
  virtual ~Task() = default;

  virtual TaskKind kind() const = 0;
  virtual const std::string& problem_id() const = 0;
  /// s_task
  virtual const std::string& task_text() const = 0;

  /// Runs one episode from the initial prompt: a single policy call for
  /// game24 and writing, one call per action for text-world tasks. Backend
  /// failures propagate as BackendError.
  virtual EpisodeOutcome run_episode(const std::string& prompt, Policy& policy,
                                     const EpisodeContext& ctx) = 0;

  /// Score Best-of-N maximizes.
  virtual double selection_score(const EpisodeOutcome& outcome) const = 0;

  /// Whether the response could be evaluated at all (Best-of-N reports when
  /// no candidate is).
  virtual bool evaluable(const EpisodeOutcome&) const { return true; }
};

}  // namespace icrl
