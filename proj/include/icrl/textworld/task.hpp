#pragma once

#include <string>

#include "icrl/core/task.hpp"
#include "icrl/textworld/adapter.hpp"
#include "icrl/textworld/world.hpp"

namespace icrl::textworld {

/// s_task: environment description, action list, the FOCUS warning and the
/// task description.
std::string render_task_text(const WorldSpec& spec);

/// Pulls the action out of a model reply: first nonempty line, without
/// "Action:" style prefixes, arrows, quotes or a trailing chain.
std::string extract_action(const std::string& reply);

/// Text-world episode: the policy is prompted once per action with S_0 plus
/// the current attempt so far (without rewards).
class TextworldTask : public Task {
 public:
  /// Native MiniLab environment.
  explicit TextworldTask(WorldSpec spec);
  /// External environment; `spec` still provides s_task, the id and the
  /// step cap.
  TextworldTask(WorldSpec spec, EnvironmentFactory factory);

  TaskKind kind() const override { return TaskKind::Textworld; }
  const std::string& problem_id() const override { return spec_.name; }
  const std::string& task_text() const override { return task_text_; }

  EpisodeOutcome run_episode(const std::string& prompt, Policy& policy,
                             const EpisodeContext& ctx) override;
  double selection_score(const EpisodeOutcome& outcome) const override;

  /// Prompt for the next action given the transcript so far.
  static std::string step_prompt(const std::string& prompt, int episode,
                                 const std::vector<Transition>& transitions);

 private:
  WorldSpec spec_;
  EnvironmentFactory factory_;
  std::string task_text_;
};

}  // namespace icrl::textworld
