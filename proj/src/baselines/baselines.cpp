#include "icrl/baselines/baselines.hpp"

#include <cctype>
#include <stdexcept>

#include "icrl/core/prompt.hpp"

namespace icrl::baselines {

const char* const kLongCotInstruction =
    "Before answering, reason at length inside <think> and </think> tags. While thinking, check "
    "your solution and if it is incorrect, keep retrying until you find one that works. After "
    "</think>, give your final answer in the required format.";

const char* const kSelfRefineFeedback =
    "Review the previous answer above. Give specific, actionable feedback on its mistakes and "
    "weak points with respect to the task. Do not write a new answer.";

const char* const kSelfRefineRefine =
    "Using the feedback above, write an improved answer to the task. Follow the required output "
    "format.";

const char* const kReflexionReflect =
    "You attempted the task above and received the score shown. Reflect on what went wrong and "
    "write a short plan for your next attempt. Reply with the reflection only.";

namespace {

struct EpisodeRun {
  EpisodeLog log;
  std::optional<EpisodeOutcome> outcome;
};

EpisodeRun run_one(Task& task, Method method, int k, const std::string& prompt, Policy& policy,
                   const RunConfig& config) {
  EpisodeRun run;
  EpisodeLog& log = run.log;
  log.method = to_string(method);
  log.task = to_string(task.kind());
  log.problem_id = task.problem_id();
  log.episode = k;
  log.prompt = prompt;
  log.prompt_chars = prompt.size();

  EpisodeContext ctx{task.problem_id(), k, policy_generation(config)};
  try {
    run.outcome = task.run_episode(prompt, policy, ctx);
  } catch (const BackendError& e) {
    log.diagnostics.push_back(std::string("backend failure: ") + e.what());
  }
  if (run.outcome) {
    run.outcome->attempt.episode_index = k;
    log.response = run.outcome->attempt.response_text;
    log.rewards = run.outcome->attempt.rewards;
    log.total_reward = run.outcome->attempt.total_reward;
    log.ground_truth = run.outcome->ground_truth;
    log.tokens_in = run.outcome->tokens_in;
    log.tokens_out = run.outcome->tokens_out;
    log.calls = run.outcome->policy_calls + run.outcome->judge_calls;
    log.diagnostics.insert(log.diagnostics.end(), run.outcome->diagnostics.begin(),
                           run.outcome->diagnostics.end());
  } else {
    log.failed = true;
    if (task.kind() != TaskKind::Writing) log.ground_truth = 0.0;
  }
  return run;
}

/// Free-form policy call outside a task episode (feedback, reflection).
std::optional<std::string> side_call(const std::string& prompt, Policy& policy,
                                     const RunConfig& config, const Task& task, int k,
                                     EpisodeLog& log) {
  GenRequest request;
  request.user_text = prompt;
  GenerationSettings g = policy_generation(config);
  request.temperature = g.temperature;
  request.max_output_tokens = g.max_output_tokens;
  request.seed = g.seed;
  request.backend_id = policy.backend_id();
  request.tag = {task.problem_id(), k, CallRole::Policy};
  try {
    GenResponse r = policy.generate(request);
    log.tokens_in += r.tokens_in;
    log.tokens_out += r.tokens_out;
    log.calls += 1;
    return r.text;
  } catch (const BackendError& e) {
    log.diagnostics.push_back(std::string("backend failure in auxiliary call: ") + e.what());
    return std::nullopt;
  }
}

std::string join_blocks(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + "\n\n" + b;
}

/// Context before the task for game24/writing, after it for text-world.
std::string with_context(const Task& task, const std::string& context) {
  if (task.kind() == TaskKind::Textworld) return join_blocks(task.task_text(), context);
  return join_blocks(context, task.task_text());
}

void finish(EpisodeLog& log, const Clock& clock, std::int64_t start, const LoopHooks& hooks) {
  log.wall_ms = clock() - start;
  if (hooks.on_episode) hooks.on_episode(log);
}

Clock clock_of(const LoopHooks& hooks) { return hooks.clock ? hooks.clock : frozen_clock(); }

}  // namespace

std::string sanitize_reflection(const std::string& text, std::size_t max_chars) {
  std::string out;
  bool space = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += static_cast<char>(c);
  }
  if (out.size() > max_chars) {
    out.resize(max_chars);
    // do not leave half a UTF-8 sequence behind
    while (!out.empty() && (static_cast<unsigned char>(out.back()) & 0xC0) == 0x80) out.pop_back();
    if (!out.empty() && (static_cast<unsigned char>(out.back()) & 0x80)) out.pop_back();
  }
  return out;
}

ReflectionBuffer::ReflectionBuffer(std::size_t window) : window_(window) {
  if (window == 0) throw std::invalid_argument("reflection window must be positive");
}

void ReflectionBuffer::push(std::string reflection) {
  entries_.push_back(std::move(reflection));
  while (entries_.size() > window_) entries_.pop_front();
}

std::vector<std::string> ReflectionBuffer::recent() const {
  return {entries_.begin(), entries_.end()};
}

std::string ReflectionBuffer::render() const {
  if (entries_.empty()) return {};
  std::string out = "Reflections on your previous attempts:";
  for (const auto& r : entries_) out += "\n<reflection>\n" + r + "\n</reflection>";
  return out;
}

EpisodeLog run_cot(Task& task, const RunConfig& config, Policy& policy, bool long_variant,
                   const LoopHooks& hooks) {
  const Clock clock = clock_of(hooks);
  const std::int64_t start = clock();
  std::string prompt = task.task_text();
  if (long_variant) prompt += std::string("\n\n") + kLongCotInstruction;
  EpisodeRun run = run_one(task, long_variant ? Method::LongCot : Method::Cot, 1, prompt, policy, config);
  finish(run.log, clock, start, hooks);
  return run.log;
}

std::optional<std::size_t> select_best(const std::vector<double>& scores) {
  if (scores.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

BestOfNResult run_best_of_n(Task& task, const RunConfig& config, Policy& policy, int n,
                            const LoopHooks& hooks) {
  if (n < 1) throw std::invalid_argument("best_of_n must be at least 1");
  const Clock clock = clock_of(hooks);
  BestOfNResult result;
  std::vector<double> scores;
  std::vector<std::size_t> trial_of;
  for (int i = 1; i <= n; ++i) {
    const std::int64_t start = clock();
    EpisodeRun run = run_one(task, Method::BestOfN, i, task.task_text(), policy, config);
    if (run.outcome && task.evaluable(*run.outcome)) {
      scores.push_back(task.selection_score(*run.outcome));
      trial_of.push_back(static_cast<std::size_t>(i));
    }
    finish(run.log, clock, start, hooks);
    result.logs.push_back(std::move(run.log));
  }
  if (auto best = select_best(scores)) {
    result.selected = static_cast<int>(trial_of[*best]);
    result.best_score = scores[*best];
  } else {
    result.no_valid_candidate = true;
  }
  return result;
}

std::vector<EpisodeLog> run_self_refine(Task& task, const RunConfig& config, Policy& policy,
                                        const LoopHooks& hooks) {
  const Clock clock = clock_of(hooks);
  std::vector<EpisodeLog> logs;
  std::string history = task.task_text();
  std::optional<std::string> last_answer;

  for (int k = 1; k <= config.episodes; ++k) {
    const std::int64_t start = clock();
    std::string prompt = history;
    EpisodeLog aux;
    if (last_answer) {
      std::string feedback_prompt = history + "\n\n" + kSelfRefineFeedback;
      if (auto feedback = side_call(feedback_prompt, policy, config, task, k, aux)) {
        history += "\n\nFeedback:\n" + *feedback;
      }
      prompt = history + "\n\n" + kSelfRefineRefine;
    }
    EpisodeRun run = run_one(task, Method::SelfRefine, k, prompt, policy, config);
    run.log.calls += aux.calls;
    run.log.tokens_in += aux.tokens_in;
    run.log.tokens_out += aux.tokens_out;
    run.log.diagnostics.insert(run.log.diagnostics.begin(), aux.diagnostics.begin(), aux.diagnostics.end());
    if (run.outcome) {
      last_answer = run.outcome->attempt.response_text;
      history += "\n\nPrevious answer:\n" + *last_answer;
    }
    finish(run.log, clock, start, hooks);
    logs.push_back(std::move(run.log));
  }
  return logs;
}

std::vector<EpisodeLog> run_reflexion(Task& task, const RunConfig& config, Policy& policy,
                                      const LoopHooks& hooks) {
  const Clock clock = clock_of(hooks);
  std::vector<EpisodeLog> logs;
  ReflectionBuffer reflections(config.reflection_window);

  for (int k = 1; k <= config.episodes; ++k) {
    const std::int64_t start = clock();
    const std::string prompt = with_context(task, reflections.render());
    EpisodeRun run = run_one(task, Method::Reflexion, k, prompt, policy, config);
    if (run.outcome && k < config.episodes) {
      std::string reflect_prompt = task.task_text() + "\n\nYour attempt:\n" +
                                   run.outcome->attempt.response_text + "\n\nScore: " +
                                   format_reward(run.outcome->attempt.total_reward) + "\n\n" +
                                   kReflexionReflect;
      if (auto text = side_call(reflect_prompt, policy, config, task, k, run.log)) {
        std::string clean = sanitize_reflection(*text);
        if (!clean.empty()) reflections.push(std::move(clean));
      }
    }
    finish(run.log, clock, start, hooks);
    logs.push_back(std::move(run.log));
  }
  return logs;
}

std::vector<EpisodeLog> run_method(Task& task, const RunConfig& config, Policy& policy,
                                   const LoopHooks& hooks) {
  switch (config.method) {
    case Method::Icrl:
      return run_problem(task, config, policy, hooks);
    case Method::Cot:
      return {run_cot(task, config, policy, false, hooks)};
    case Method::LongCot:
      return {run_cot(task, config, policy, true, hooks)};
    case Method::BestOfN:
      return run_best_of_n(task, config, policy, config.best_of_n, hooks).logs;
    case Method::SelfRefine:
      return run_self_refine(task, config, policy, hooks);
    case Method::Reflexion:
      return run_reflexion(task, config, policy, hooks);
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace icrl::baselines
