#pragma once

#include <array>
#include <string>
#include <vector>

#include "icrl/core/attempt.hpp"
#include "icrl/core/task.hpp"
#include "icrl/game24/expr.hpp"
#include "icrl/policy/policy.hpp"

namespace icrl::game24 {

struct Game24Problem {
  std::string problem_id;
  std::array<int, 4> inputs{};

  std::vector<Rational> rationals() const;
  /// "4 9 10 13"
  std::string inputs_text() const;
};

/// One problem per line, four integers separated by spaces; blank lines and
/// lines starting with '#' are skipped. Ids are "p001", "p002", ... by
/// line order. Throws std::runtime_error naming the line.
std::vector<Game24Problem> load_problems(const std::string& path);
Game24Problem parse_problem_line(const std::string& line, std::string problem_id);

/// s_task: five worked demonstrations, the answer-format instruction and the
/// problem's input line.
std::string render_task_text(const Game24Problem& problem);

/// "<attempt>\nInput: ...\nResponse:\nStep1: ... <Reward: 3.00>\n...</attempt>"
std::string render_attempt_block(const AttemptRecord& attempt, bool zero_rewards);

struct JudgeSettings {
  double temperature = 0.0;
  int max_output_tokens = 256;
};

/// Game of 24 with the step judge as reward r and the exact verifier as r*.
class Game24Task : public Task {
 public:
  Game24Task(Game24Problem problem, Policy& judge, JudgeSettings judge_settings = {});

  TaskKind kind() const override { return TaskKind::Game24; }
  const std::string& problem_id() const override { return problem_.problem_id; }
  const std::string& task_text() const override { return task_text_; }

  EpisodeOutcome run_episode(const std::string& prompt, Policy& policy,
                             const EpisodeContext& ctx) override;

  /// Judges an already generated response: four step-judge calls plus the
  /// exact verification.
  EpisodeOutcome score_response(const std::string& response, const EpisodeContext& ctx);

  double selection_score(const EpisodeOutcome& outcome) const override;
  bool evaluable(const EpisodeOutcome& outcome) const override;

  const Game24Problem& problem() const { return problem_; }

 private:
  Game24Problem problem_;
  Policy& judge_;
  JudgeSettings judge_settings_;
  std::string task_text_;
};

}  // namespace icrl::game24
