#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "icrl/core/config.hpp"
#include "icrl/core/episode_log.hpp"
#include "icrl/core/loop.hpp"
#include "icrl/core/task.hpp"

namespace icrl::baselines {

/// Appended to s_task for the Long-CoT variant.
extern const char* const kLongCotInstruction;
extern const char* const kSelfRefineFeedback;
extern const char* const kSelfRefineRefine;
extern const char* const kReflexionReflect;

/// Whitespace normalization plus a length cap applied to reflections before
/// they are stored.
std::string sanitize_reflection(const std::string& text, std::size_t max_chars = 1200);

class ReflectionBuffer {
 public:
  explicit ReflectionBuffer(std::size_t window = 3);

  void push(std::string reflection);
  /// At most `window` newest reflections, oldest first.
  std::vector<std::string> recent() const;
  std::size_t size() const { return entries_.size(); }
  /// "<reflection>\n...\n</reflection>" blocks under a short header; empty
  /// when there are none.
  std::string render() const;

 private:
  std::size_t window_;
  std::deque<std::string> entries_;
};

/// Single pass on s_task (with the think-tag instruction for Long-CoT).
EpisodeLog run_cot(Task& task, const RunConfig& config, Policy& policy, bool long_variant,
                   const LoopHooks& hooks = {});

struct BestOfNResult {
  std::vector<EpisodeLog> logs;
  std::optional<int> selected;  // 1-based trial index
  double best_score = 0.0;
  bool no_valid_candidate = false;
};

/// Argmax with earliest-index tie-break. Returns nullopt for an empty list.
std::optional<std::size_t> select_best(const std::vector<double>& scores);

/// N independent samples on s_task; the selector is the task's
/// selection_score (r* for game24, judge reward for writing, return for
/// text-world tasks).
BestOfNResult run_best_of_n(Task& task, const RunConfig& config, Policy& policy, int n,
                            const LoopHooks& hooks = {});

/// Generate, then K-1 rounds of self feedback and refinement with the whole
/// history in context. Model calls: 1 + 2(K-1) for single-call tasks.
std::vector<EpisodeLog> run_self_refine(Task& task, const RunConfig& config, Policy& policy,
                                        const LoopHooks& hooks = {});

/// Attempt, score, reflect. Attempt prompts hold s_task plus the last
/// `window` reflections only.
std::vector<EpisodeLog> run_reflexion(Task& task, const RunConfig& config, Policy& policy,
                                      const LoopHooks& hooks = {});

/// Dispatches on config.method (Icrl goes to run_problem).
std::vector<EpisodeLog> run_method(Task& task, const RunConfig& config, Policy& policy,
                                   const LoopHooks& hooks = {});

}  // namespace icrl::baselines
