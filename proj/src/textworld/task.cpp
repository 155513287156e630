#include "icrl/textworld/task.hpp"

#include <cctype>
#include <sstream>

#include "icrl/textworld/render.hpp"

namespace icrl::textworld {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool starts_with_ci(const std::string& s, const std::string& prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != prefix[i]) return false;
  }
  return true;
}

}  // namespace

std::string render_task_text(const WorldSpec& spec) {
  std::string rooms;
  for (const auto& r : spec.rooms) rooms += (rooms.empty() ? "" : ", ") + r;
  std::string actions;
  for (const auto& a : action_templates()) actions += a + "\n";

  return "You are a helpful assistant to do some scientific experiment in an environment.\n\n"
         "<Environment description>\n"
         "In the environment, there are several rooms: " + rooms + "\n"
         "You should explore the environment and find the items you need to complete the experiment.\n\n"
         "The available actions are:\n" + actions + "\n"
         "FOCUS is a extremely critical action that can be only used the number of times 'focus' is "
         "mentioned in the task description. Using it more than that or inappropiately (such as on a "
         "wrong object) will terminate the session and the task WILL FAIL.\n\n"
         "Task Description:\n" + spec.task_description + "\n"
         "</Environment description>";
}

std::string extract_action(const std::string& reply) {
  std::string text = reply;
  if (auto close = text.rfind("</think>"); close != std::string::npos) text = text.substr(close + 8);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) break;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const char* prefix : {"next action:", "action:", "->", ">", "`", "\"", "*"}) {
      if (starts_with_ci(line, prefix)) {
        line = trim(line.substr(std::string(prefix).size()));
        changed = true;
      }
    }
  }
  if (auto arrow = line.find(" ->"); arrow != std::string::npos) line = trim(line.substr(0, arrow));
  while (!line.empty() && (line.back() == '`' || line.back() == '"' || line.back() == '*' ||
                           line.back() == '.')) {
    line.pop_back();
  }
  return trim(line);
}

TextworldTask::TextworldTask(WorldSpec spec)
    : spec_(std::move(spec)), task_text_(render_task_text(spec_)) {
  auto shared = std::make_shared<const WorldSpec>(spec_);
  factory_ = [shared] { return std::make_unique<MiniLabEnvironment>(*shared); };
}

TextworldTask::TextworldTask(WorldSpec spec, EnvironmentFactory factory)
    : spec_(std::move(spec)), factory_(std::move(factory)), task_text_(render_task_text(spec_)) {}

std::string TextworldTask::step_prompt(const std::string& prompt, int episode,
                                       const std::vector<Transition>& transitions) {
  std::string out = prompt + "\n\nCurrent attempt (Attempt " + std::to_string(episode) + "):\n";
  if (!transitions.empty()) out += render_chain(transitions, false) + "\n";
  out += "Respond with the next action only.";
  return out;
}

EpisodeOutcome TextworldTask::run_episode(const std::string& prompt, Policy& policy,
                                          const EpisodeContext& ctx) {
  EpisodeOutcome outcome;
  std::unique_ptr<Environment> env = factory_();
  std::vector<Transition> transitions;
  int total = 0;
  bool done = false;

  while (!done) {
    if (static_cast<int>(transitions.size()) >= spec_.max_steps) {
      outcome.diagnostics.push_back("environment did not terminate within max_steps");
      break;
    }
    GenRequest request;
    request.user_text = step_prompt(prompt, ctx.episode, transitions);
    request.temperature = ctx.generation.temperature;
    request.max_output_tokens = ctx.generation.max_output_tokens;
    request.seed = ctx.generation.seed;
    request.backend_id = policy.backend_id();
    request.tag = {ctx.problem_id, ctx.episode, CallRole::Policy};
    GenResponse response = policy.generate(request);
    outcome.tokens_in += response.tokens_in;
    outcome.tokens_out += response.tokens_out;
    outcome.policy_calls += 1;

    std::string action = extract_action(response.text);
    EnvStep step = env->step(action);
    transitions.push_back({action, step.observation, step.reward});
    total = step.total;
    done = step.done;
  }

  AttemptRecord& a = outcome.attempt;
  a.episode_index = ctx.episode;
  a.response_text = render_chain(transitions, false);
  a.transitions = transitions;
  a.rewards = trajectory_rewards(transitions);
  a.total_reward = total;
  a.outcome_note = done ? env->terminal_line() : terminal_line(Status::FailSteps);
  outcome.ground_truth = total;
  return outcome;
}

double TextworldTask::selection_score(const EpisodeOutcome& outcome) const {
  return outcome.attempt.total_reward;
}

}  // namespace icrl::textworld
