#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "icrl/core/attempt.hpp"
#include "icrl/core/task.hpp"
#include "icrl/policy/policy.hpp"

namespace icrl::writing {

struct WritingProblem {
  std::string problem_id;
  std::vector<std::string> end_sentences;  // exactly 4
};

/// JSON lines: {"id": "...", "sentences": ["...", "...", "...", "..."]}.
/// Missing ids become "w001", "w002", ... Throws std::runtime_error.
std::vector<WritingProblem> load_problems(const std::string& path);

/// The single coherent reference passage every candidate is compared with.
std::string default_base_answer();
std::string load_base_answer(const std::string& path);

/// s_task with the four end sentences inlined. Throws std::invalid_argument
/// unless there are exactly four nonempty sentences.
std::string render_writing_task(const WritingProblem& problem);

struct ConstraintReport {
  bool has_plan_and_passage = false;
  bool paragraph_count_ok = false;
  std::size_t paragraph_count = 0;
  std::array<bool, 4> ends_with_sentence{};

  bool all_ok() const;
};

/// Format diagnostics only; never feeds into rewards.
ConstraintReport check_constraints(std::string_view response, const WritingProblem& problem);

/// Lower-cases nothing; unifies curly quotes/apostrophes, collapses
/// whitespace and trims trailing whitespace and quote marks.
std::string normalize_sentence(std::string_view text);

/// The pairwise coherence judge prompt. Throws std::invalid_argument on an
/// empty candidate.
std::string render_coherence_prompt(std::string_view candidate, std::string_view base_answer);

/// Last "Coherency score: n" with n in 1..10.
std::optional<int> parse_coherence_score(std::string_view reply);

/// "<attempt>\nResponse:\n...\nReward: 7.00\n</attempt>"
std::string render_attempt_block(const AttemptRecord& attempt, bool zero_rewards);

struct JudgeSettings {
  double temperature = 0.0;
  int max_output_tokens = 64;
};

/// Creative writing with the coherence judge as r. Ground truth is external
/// (pairwise evaluation of exported responses), so outcomes carry none.
class WritingTask : public Task {
 public:
  WritingTask(WritingProblem problem, std::string base_answer, Policy& judge,
              JudgeSettings judge_settings = {});

  TaskKind kind() const override { return TaskKind::Writing; }
  const std::string& problem_id() const override { return problem_.problem_id; }
  const std::string& task_text() const override { return task_text_; }

  EpisodeOutcome run_episode(const std::string& prompt, Policy& policy,
                             const EpisodeContext& ctx) override;
  EpisodeOutcome score_response(const std::string& response, const EpisodeContext& ctx);
  double selection_score(const EpisodeOutcome& outcome) const override;

 private:
  WritingProblem problem_;
  std::string base_answer_;
  Policy& judge_;
  JudgeSettings judge_settings_;
  std::string task_text_;
};

struct ExportRecord {
  std::string instruction;
  std::string output;
  std::string generator;
  std::string problem_id;
};

/// JSON array of {instruction, output, generator, dataset} records for an
/// external pairwise evaluator.
nlohmann::json export_pairwise_records(const std::vector<ExportRecord>& records);

}  // namespace icrl::writing
